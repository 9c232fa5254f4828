#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace advocate {

// 32-byte content digest. Tagged so block ids and transaction ids are distinct
// types even though both are SHA-256 outputs.
template <typename Tag>
struct digest32 {
  std::array<uint8_t, 32> bytes{};

  auto operator<=>(const digest32&) const = default;

  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }

  std::string hex() const;
  std::string short_hex() const { return hex().substr(0, 12); }

  static digest32 from_hex(std::string_view hex);
};

struct block_id_tag;
struct tx_id_tag;
using block_id = digest32<block_id_tag>;
using tx_id = digest32<tx_id_tag>;

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);
std::array<uint8_t, 32> sha256(std::string_view data);

std::string bytes_to_hex(std::span<const uint8_t> data);
std::vector<uint8_t> hex_to_bytes(std::string_view hex);

template <typename Tag>
std::string digest32<Tag>::hex() const {
  return bytes_to_hex(std::span<const uint8_t>(bytes.data(), bytes.size()));
}

template <typename Tag>
digest32<Tag> digest32<Tag>::from_hex(std::string_view hex) {
  digest32 d;
  auto raw = hex_to_bytes(hex);
  std::memcpy(d.bytes.data(), raw.data(), std::min<size_t>(32, raw.size()));
  return d;
}

// Incremental canonical serializer: little-endian fixed-width integers and
// u32-length-prefixed byte strings. Every hashed object goes through this.
class byte_writer {
public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void raw(std::span<const uint8_t> data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  void bytes(std::span<const uint8_t> data) {
    u32(static_cast<uint32_t>(data.size()));
    raw(data);
  }
  template <typename Tag>
  void digest(const digest32<Tag>& d) {
    raw(std::span<const uint8_t>(d.bytes.data(), d.bytes.size()));
  }

  const std::vector<uint8_t>& data() const { return buf_; }
  std::array<uint8_t, 32> hash() const { return sha256(buf_); }

private:
  std::vector<uint8_t> buf_;
};

} // namespace advocate
