#include <advocate/fork_choice.hpp>

#include <algorithm>

namespace advocate {

namespace {

bool embeds_certificate(const block& b, const certificate& cert) {
  return b.embedded_cert && b.embedded_cert->index == cert.index &&
         b.embedded_cert->checkpointed_block == cert.checkpointed_block &&
         b.embedded_cert->signature.valid;
}

} // namespace

std::optional<block_id> find_referring_block(const block_tree& tree, const certificate& cert,
                                             uint32_t window_c) {
  if (!tree.contains(cert.checkpointed_block)) return std::nullopt;
  if (cert.index == 0) return cert.checkpointed_block; // bootstrap: genesis anchors itself

  // Level-order scan of the window keeps the (depth, id) minimum cheap: the
  // first embedding found at the shallowest depth wins.
  std::vector<block_id> frontier{cert.checkpointed_block};
  for (uint32_t step = 1; step <= window_c; ++step) {
    std::vector<block_id> next;
    for (const auto& id : frontier) {
      const auto& kids = tree.children(id);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    if (next.empty()) return std::nullopt;
    std::sort(next.begin(), next.end());
    for (const auto& id : next) {
      if (embeds_certificate(tree.get(id), cert)) return id;
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

void refresh_view(checkpoint_view& view, const block_tree& tree) {
  view.referring_block = find_referring_block(tree, view.latest_cert, view.window_c);
}

std::vector<block_id> select_main_chain(const block_tree& tree, const checkpoint_view& view) {
  const block_id& checkpointed = view.latest_cert.checkpointed_block;
  if (!tree.contains(checkpointed)) {
    raise(errc::unknown_checkpoint, checkpointed.short_hex());
  }

  // Case 1: longest chain through the referring block.
  if (view.referring_block && tree.contains(*view.referring_block)) {
    return tree.path_from_genesis(tree.deepest_tip(*view.referring_block));
  }

  uint64_t base_depth = tree.depth(checkpointed);
  block_id longest_tip = tree.deepest_tip(checkpointed);
  uint64_t tip_depth = tree.depth(longest_tip);

  // Case 2: the checkpointed block is not yet c-deep.
  if (tip_depth < base_depth + view.window_c) {
    return tree.path_from_genesis(longest_tip);
  }

  // Case 3: truncate at depth(B_i) + c - 1 so the next block mined on this
  // tip can still publish the certificate inside the window.
  auto candidates = tree.descendants_at_depth(checkpointed, base_depth + view.window_c - 1);
  return tree.path_from_genesis(candidates.front());
}

bool is_block_acceptable(const block_tree& tree, const checkpoint_view& view, const block& b) {
  if (!tree.contains(b.parent)) return false;

  const certificate& cert = view.latest_cert;
  if (!tree.contains(cert.checkpointed_block)) return false;
  uint64_t base_depth = tree.depth(cert.checkpointed_block);
  uint64_t block_depth = tree.depth(b.parent) + 1;

  // (b) the chain must contain the latest checkpointed block.
  if (block_depth <= base_depth) return false;
  if (!tree.is_ancestor(cert.checkpointed_block, b.parent)) return false;

  // (c) embedded certificates must carry a valid signature and sit inside
  // their own window.
  if (b.embedded_cert) {
    if (!b.embedded_cert->signature.valid) return false;
    if (tree.contains(b.embedded_cert->checkpointed_block)) {
      uint64_t cp_depth = tree.depth(b.embedded_cert->checkpointed_block);
      if (block_depth > cp_depth + view.window_c) return false;
    }
  }

  // (a) past the window the branch must already carry a referring block; an
  // embedding beyond the window does not qualify.
  if (block_depth > base_depth + view.window_c && cert.index > 0) {
    bool found = false;
    block_id cur = b.parent;
    uint64_t d = tree.depth(b.parent);
    while (d > base_depth) {
      if (d <= base_depth + view.window_c && embeds_certificate(tree.get(cur), cert)) {
        found = true;
        break;
      }
      cur = tree.get(cur).parent;
      --d;
    }
    if (!found) return false;
  }
  return true;
}

namespace {

bool chain_contains_certificate(const block_tree& tree, const std::vector<block_id>& chain,
                                const certificate& cert, uint32_t window_c) {
  if (cert.index == 0) return true; // bootstrap needs no publication
  if (!tree.contains(cert.checkpointed_block)) return false;
  uint64_t base_depth = tree.depth(cert.checkpointed_block);
  uint64_t lo = base_depth + 1;
  uint64_t hi = base_depth + window_c;
  for (uint64_t d = lo; d <= hi && d < chain.size(); ++d) {
    if (embeds_certificate(tree.get(chain[d]), cert)) return true;
  }
  return false;
}

} // namespace

block_template next_block_template(const block_tree& tree, const checkpoint_view& view,
                                   std::vector<transaction> mempool, bool hooks_enabled) {
  auto chain = select_main_chain(tree, view);
  block_template tmpl;
  tmpl.parent = chain.back();
  tmpl.txs = std::move(mempool);
  if (!chain_contains_certificate(tree, chain, view.latest_cert, view.window_c)) {
    tmpl.embedded_cert = view.latest_cert;
  }
  if (hooks_enabled) tmpl.hook = view.latest_cert.index;
  return tmpl;
}

} // namespace advocate
