#include <advocate/merkle.hpp>

namespace advocate {

block_id merkle_root(std::span<const block_id> leaves) {
  if (leaves.empty()) return block_id{};

  std::vector<std::array<uint8_t, 32>> level;
  level.reserve(leaves.size());
  for (const auto& leaf : leaves) {
    byte_writer w;
    w.u8(0x00);
    w.digest(leaf);
    level.push_back(w.hash());
  }

  while (level.size() > 1) {
    if (level.size() % 2 == 1) level.push_back(level.back());
    std::vector<std::array<uint8_t, 32>> next;
    next.reserve(level.size() / 2);
    for (size_t i = 0; i < level.size(); i += 2) {
      byte_writer w;
      w.u8(0x01);
      w.raw(level[i]);
      w.raw(level[i + 1]);
      next.push_back(w.hash());
    }
    level = std::move(next);
  }

  block_id root;
  root.bytes = level.front();
  return root;
}

} // namespace advocate
