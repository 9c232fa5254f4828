#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace advocate {

// Platform-stable seedable generator (xoshiro256**, seeded through splitmix64).
// std::mt19937_64 itself is portable but the standard distributions are not,
// so every stochastic choice in the simulator flows through this type and its
// explicitly-defined helpers.
class prng {
public:
  prng() : prng(0, "") {}

  // Streams derived from the same run seed but different tags are independent.
  // The simulator gives mining, adversary, transaction generation and chain
  // sortition their own streams so that paired runs (e.g. a beta=0 reference)
  // keep identical draws on the shared streams.
  prng(uint64_t seed, std::string_view stream_tag);

  uint64_t next();

  // Uniform in [0, 1) with 53 bits of randomness.
  double next_unit();

  // Uniform in [0, n). Modulo reduction; the bias is irrelevant at simulator
  // scale and the result is deterministic everywhere.
  uint64_t next_below(uint64_t n);

  bool bernoulli(double p) { return next_unit() < p; }

private:
  std::array<uint64_t, 4> s_;
};

} // namespace advocate
