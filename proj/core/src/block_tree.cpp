#include <advocate/block_tree.hpp>

#include <algorithm>
#include <queue>

namespace advocate {

void block_tree::insert_block(const block& b) {
  if (nodes_.count(b.id)) raise(errc::duplicate_block, "block " + b.id.short_hex());

  if (b.is_genesis()) {
    if (has_genesis_) raise(errc::duplicate_block, "second genesis");
    genesis_ = b.id;
    has_genesis_ = true;
    depth_[b.id] = 0;
  } else {
    auto it = depth_.find(b.parent);
    if (it == depth_.end()) raise(errc::unknown_parent, "parent " + b.parent.short_hex());
    depth_[b.id] = it->second + 1;
    auto& siblings = children_[b.parent];
    siblings.insert(std::lower_bound(siblings.begin(), siblings.end(), b.id), b.id);
    leaves_.erase(b.parent);
  }
  nodes_.emplace(b.id, b);
  leaves_.insert(b.id);
}

const block& block_tree::get(const block_id& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) raise(errc::unknown_block, id.short_hex());
  return it->second;
}

uint64_t block_tree::depth(const block_id& id) const {
  auto it = depth_.find(id);
  if (it == depth_.end()) raise(errc::unknown_block, id.short_hex());
  return it->second;
}

const block_id& block_tree::genesis() const {
  if (!has_genesis_) raise(errc::unknown_block, "empty tree");
  return genesis_;
}

const std::vector<block_id>& block_tree::children(const block_id& id) const {
  static const std::vector<block_id> none;
  auto it = children_.find(id);
  return it == children_.end() ? none : it->second;
}

std::set<block_id> block_tree::subtree_leaves(const block_id& root) const {
  if (!contains(root)) raise(errc::unknown_block, root.short_hex());
  std::set<block_id> out;
  std::vector<block_id> stack{root};
  while (!stack.empty()) {
    block_id cur = stack.back();
    stack.pop_back();
    const auto& kids = children(cur);
    if (kids.empty()) {
      out.insert(cur);
    } else {
      stack.insert(stack.end(), kids.begin(), kids.end());
    }
  }
  return out;
}

bool block_tree::is_ancestor(const block_id& ancestor, const block_id& descendant) const {
  uint64_t target = depth(ancestor);
  block_id cur = descendant;
  uint64_t d = depth(descendant);
  while (d > target) {
    cur = get(cur).parent;
    --d;
  }
  return cur == ancestor;
}

block_id block_tree::ancestor_at_depth(const block_id& id, uint64_t target_depth) const {
  block_id cur = id;
  uint64_t d = depth(id);
  if (target_depth > d) raise(errc::unknown_block, "ancestor deeper than block");
  while (d > target_depth) {
    cur = get(cur).parent;
    --d;
  }
  return cur;
}

std::vector<block_id> block_tree::path_from_genesis(const block_id& id) const {
  std::vector<block_id> path;
  path.reserve(depth(id) + 1);
  block_id cur = id;
  while (true) {
    path.push_back(cur);
    const block& b = get(cur);
    if (b.is_genesis()) break;
    cur = b.parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<block_id> block_tree::all_ids() const {
  std::vector<block_id> out;
  out.reserve(nodes_.size());
  for (const auto& [id, b] : nodes_) out.push_back(id);
  return out;
}

block_id block_tree::deepest_tip(const block_id& root) const {
  uint64_t root_depth = depth(root);
  block_id best = root;
  uint64_t best_depth = root_depth;
  // Leaves below root's depth cannot be in its subtree; the remaining ancestor
  // walks are bounded by the subtree height.
  for (const auto& leaf : leaves_) {
    uint64_t d = depth(leaf);
    if (d < best_depth || (d == best_depth && !(leaf < best))) continue;
    if (is_ancestor(root, leaf)) {
      best = leaf;
      best_depth = d;
    }
  }
  return best;
}

std::vector<block_id> block_tree::descendants_at_depth(const block_id& root,
                                                       uint64_t target_depth) const {
  std::vector<block_id> out;
  uint64_t root_depth = depth(root);
  if (target_depth < root_depth) return out;
  if (target_depth == root_depth) return {root};
  std::vector<block_id> frontier{root};
  for (uint64_t d = root_depth; d < target_depth; ++d) {
    std::vector<block_id> next;
    for (const auto& id : frontier) {
      const auto& kids = children(id);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    frontier = std::move(next);
    if (frontier.empty()) return out;
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

std::vector<block_id> canonical_block_order(const std::set<block_id>& blocks,
                                            const block_tree& tree) {
  // Kahn's algorithm with a min-ordered frontier: greedily emitting the
  // smallest available id yields the lexicographically smallest valid order.
  std::map<block_id, int> pending_parent;
  for (const auto& id : blocks) {
    if (!tree.contains(id)) raise(errc::unknown_block, id.short_hex());
    const block& b = tree.get(id);
    pending_parent[id] = (!b.is_genesis() && blocks.count(b.parent)) ? 1 : 0;
  }

  std::set<block_id> ready;
  for (const auto& [id, n] : pending_parent) {
    if (n == 0) ready.insert(id);
  }

  std::vector<block_id> order;
  order.reserve(blocks.size());
  while (!ready.empty()) {
    block_id next = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(next);
    for (const auto& child : tree.children(next)) {
      auto it = pending_parent.find(child);
      if (it != pending_parent.end() && --it->second == 0) ready.insert(child);
    }
  }

  if (order.size() != blocks.size()) raise(errc::cyclic_input, "unsatisfiable parent constraints");
  return order;
}

} // namespace advocate
