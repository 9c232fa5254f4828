#pragma once

#include <advocate/errors.hpp>
#include <advocate/types.hpp>

#include <map>
#include <set>
#include <vector>

namespace advocate {

// Append-only tree of blocks keyed by id.
//
// Invariants:
//  1. depth(genesis) == 0, depth(b) == depth(parent(b)) + 1
//  2. leaves == nodes with no children; every node reachable from genesis
//  3. exactly one path from any node to genesis
//
// Ordered containers throughout: iteration order is part of the determinism
// contract, never an accident.
class block_tree {
public:
  block_tree() = default;

  // @pre block.parent in tree, or block is genesis into an empty tree
  // @pre block.id not already present
  // @post leaves and depth updated; duplicate ids and unknown parents throw
  void insert_block(const block& b);

  bool contains(const block_id& id) const { return nodes_.find(id) != nodes_.end(); }

  const block& get(const block_id& id) const;
  uint64_t depth(const block_id& id) const;

  const block_id& genesis() const;
  bool empty() const { return nodes_.empty(); }
  size_t size() const { return nodes_.size(); }

  const std::set<block_id>& leaves() const { return leaves_; }
  const std::vector<block_id>& children(const block_id& id) const;

  // Leaves whose ancestor chain includes `root`.
  std::set<block_id> subtree_leaves(const block_id& root) const;

  // True iff `ancestor` is on the path from `descendant` to genesis
  // (inclusive: a block is its own ancestor).
  bool is_ancestor(const block_id& ancestor, const block_id& descendant) const;

  // Ancestor of `id` at the given depth.
  // @pre target_depth <= depth(id)
  block_id ancestor_at_depth(const block_id& id, uint64_t target_depth) const;

  // Path genesis -> id, inclusive.
  std::vector<block_id> path_from_genesis(const block_id& id) const;

  // All block ids in the tree, ascending.
  std::vector<block_id> all_ids() const;

  // Deepest tip in the subtree rooted at `root`, ties broken by ascending id.
  // This is the longest-chain choice through `root`.
  block_id deepest_tip(const block_id& root) const;

  // Blocks at exactly `target_depth` in the subtree of `root`, ascending id.
  std::vector<block_id> descendants_at_depth(const block_id& root, uint64_t target_depth) const;

private:
  std::map<block_id, block> nodes_;
  std::map<block_id, std::vector<block_id>> children_; // sorted ascending
  std::map<block_id, uint64_t> depth_;
  std::set<block_id> leaves_;
  block_id genesis_;
  bool has_genesis_ = false;
};

// The universal topological order pi: parents before children, ties broken by
// ascending id bytes. Equivalently the lexicographically smallest topological
// order of the set (greedy smallest-available). Parents outside the set are
// treated as already committed.
//
// errors: CyclicInput (defensive; cannot occur for blocks from a well-formed
// tree), UnknownBlock if a block is not in the tree.
std::vector<block_id> canonical_block_order(const std::set<block_id>& blocks,
                                            const block_tree& tree);

} // namespace advocate
