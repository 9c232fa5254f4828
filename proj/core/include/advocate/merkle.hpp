#pragma once

#include <advocate/hash.hpp>

#include <span>
#include <vector>

namespace advocate {

// Merkle root over a reference list, leaves in the order given (the universal
// topological order when called on certificate references).
//
// Construction: binary tree, duplicate-last-leaf padding at odd levels,
// domain-separated hashing (0x00 for leaves, 0x01 for interior nodes).
// Empty input hashes to the all-zero digest.
block_id merkle_root(std::span<const block_id> leaves);

} // namespace advocate
