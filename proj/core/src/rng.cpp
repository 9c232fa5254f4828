#include <advocate/rng.hpp>

namespace advocate {

namespace {

inline uint64_t splitmix64(uint64_t& x) {
  uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// FNV-1a, enough to turn a stream tag into seed material.
inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

prng::prng(uint64_t seed, std::string_view stream_tag) {
  uint64_t x = seed ^ fnv1a(stream_tag);
  for (auto& word : s_) word = splitmix64(x);
}

uint64_t prng::next() {
  const uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double prng::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

uint64_t prng::next_below(uint64_t n) {
  return n == 0 ? 0 : next() % n;
}

} // namespace advocate
