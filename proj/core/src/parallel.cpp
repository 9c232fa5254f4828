#include <advocate/parallel.hpp>

#include <algorithm>

namespace advocate {

certificate pc_certificate::to_core_certificate() const {
  certificate c;
  c.index = index;
  c.checkpointed_block = base_block;
  c.references = references;
  c.signature = signature;
  c.issued_round = issued_round;
  return c;
}

pc_state make_pc_state(pc_config config) {
  if (config.chains == 0) raise(errc::config_error, "need at least one chain");
  pc_state st;
  st.config = config;
  st.last.index = 0;
  st.last.base_block = make_genesis(0).id;
  st.last.base_rank = 0;
  st.last.references = {st.last.base_block};
  for (uint32_t m = 1; m < config.chains; ++m) st.last.tips.push_back(make_genesis(m).id);
  st.last.signature = mock_signature{0, true};
  st.referenced.insert(st.last.base_block);
  for (uint32_t m = 1; m < config.chains; ++m) st.referenced.insert(make_genesis(m).id);
  return st;
}

checkpoint_view pc_base_view(const pc_state& state, const block_tree& base_tree) {
  checkpoint_view view{state.last.to_core_certificate(), std::nullopt, state.config.window_c,
                       state.config.epoch_e};
  refresh_view(view, base_tree);
  return view;
}

std::optional<block_id> pc_referring_base_block(const block_tree& base_tree,
                                                const pc_certificate& cert, uint32_t window_c) {
  return find_referring_block(base_tree, cert.to_core_certificate(), window_c);
}

namespace {

// Anchor for chain m under the latest certificate: the base block for the
// base chain, the certificate's tip entry otherwise.
block_id chain_anchor(const pc_state& state, uint32_t m) {
  return m == 0 ? state.last.base_block : state.last.tips.at(m - 1);
}

// Does the branch ending at `tip_parent` (inclusive) carry a block whose
// base_ref acknowledges `target` at rank <= deadline?
bool branch_refers(const block_tree& tree, const block_id& from, uint64_t stop_rank,
                   uint64_t deadline_rank, const block_id& target) {
  block_id cur = from;
  uint64_t rank = tree.depth(from);
  while (rank > stop_rank) {
    if (rank <= deadline_rank) {
      const block& b = tree.get(cur);
      if (b.base_ref && *b.base_ref == target) return true;
    }
    cur = tree.get(cur).parent;
    --rank;
  }
  return false;
}

} // namespace

bool pc_block_valid(const std::vector<block_tree>& trees, const pc_state& state, const block& b) {
  if (b.chain_id >= trees.size()) return false;
  const block_tree& tree = trees[b.chain_id];
  if (!tree.contains(b.parent)) return false;

  block_id anchor = chain_anchor(state, b.chain_id);
  if (!tree.contains(anchor)) return false;

  // Rule 1: extend the latest checkpoint anchor.
  if (!tree.is_ancestor(anchor, b.parent)) return false;

  uint64_t rank = tree.depth(b.parent) + 1;
  uint64_t deadline = state.last.base_rank + state.config.window_c;
  if (state.last.index == 0 || rank <= deadline) return true;

  if (b.chain_id == 0) {
    // Rule 2: past the window the base branch must carry the certificate.
    checkpoint_view view{state.last.to_core_certificate(), std::nullopt, state.config.window_c,
                         state.config.epoch_e};
    return is_block_acceptable(tree, view, b);
  }

  // Rule 3: past the deadline a non-base branch must have acknowledged the
  // certificate-bearing base block.
  auto referring = pc_referring_base_block(trees[0], state.last, state.config.window_c);
  if (!referring) return false;
  return branch_refers(tree, b.parent, tree.depth(anchor), deadline, *referring) ||
         (b.base_ref && *b.base_ref == *referring && rank <= deadline);
}

namespace {

std::vector<block_id> collect_payload(const pc_state& state,
                                      const std::vector<block_tree>& trees,
                                      const block_id& base_candidate,
                                      bool include_descendants) {
  const block_tree& base = trees[0];

  std::set<block_id> on_chain;
  for (const auto& id : base.path_from_genesis(base_candidate)) on_chain.insert(id);

  std::set<block_id> below; // next epoch's territory on the base chain
  if (!include_descendants) {
    std::vector<block_id> stack{base_candidate};
    while (!stack.empty()) {
      block_id cur = stack.back();
      stack.pop_back();
      for (const auto& child : base.children(cur)) {
        below.insert(child);
        stack.push_back(child);
      }
    }
  }

  struct entry {
    uint32_t chain;
    uint64_t rank;
    block_id id;
  };
  std::vector<entry> picked;

  for (uint32_t m = 0; m < trees.size(); ++m) {
    if (!state.config.payload_carrying(m)) continue;
    const block_tree& tree = trees[m];
    for (const auto& id : tree.all_ids()) {
      uint64_t rank = tree.depth(id);
      if (state.referenced.count(id)) continue;
      if (m == 0 && (on_chain.count(id) || below.count(id))) continue;
      picked.push_back(entry{m, rank, id});
    }
  }

  std::sort(picked.begin(), picked.end(), [](const entry& a, const entry& b) {
    if (a.chain != b.chain) return a.chain < b.chain;
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.id < b.id;
  });

  std::vector<block_id> out;
  out.reserve(picked.size());
  for (const auto& e : picked) out.push_back(e.id);
  return out;
}

pc_certificate pc_emit(const std::vector<block_tree>& trees, pc_state& state,
                       const block_id& base_candidate, uint64_t round, bool closing = false) {
  const block_tree& base = trees[0];

  pc_certificate cert;
  cert.index = state.last.index + 1;
  cert.base_block = base_candidate;
  cert.base_rank = base.depth(base_candidate);
  cert.references = collect_payload(state, trees, base_candidate, closing);
  cert.signature = mock_signature{state.issuer, true};
  cert.issued_round = round;

  // Tip eligibility: a chain's tip enters B_i only if the chain acknowledged
  // the previous certificate; otherwise the old anchor carries forward.
  auto prev_referring = pc_referring_base_block(base, state.last, state.config.window_c);
  for (uint32_t m = 1; m < trees.size(); ++m) {
    block_id prev_anchor = state.last.tips.at(m - 1);
    block_id tip = trees[m].deepest_tip(prev_anchor);
    bool eligible = state.last.index == 0 ||
                    (prev_referring && branch_refers(trees[m], tip, trees[m].depth(prev_anchor),
                                                     UINT64_MAX, *prev_referring));
    cert.tips.push_back(eligible ? tip : prev_anchor);
  }

  for (const auto& id : base.path_from_genesis(base_candidate)) state.referenced.insert(id);
  for (const auto& id : cert.references) state.referenced.insert(id);
  state.last = cert;
  return cert;
}

} // namespace

std::vector<block_id> pc_collect_references(const pc_state& state,
                                            const std::vector<block_tree>& trees,
                                            const block_id& base_candidate) {
  return collect_payload(state, trees, base_candidate, false);
}

std::optional<pc_certificate> pc_checkpoint_step(const std::vector<block_tree>& trees,
                                                 pc_state& state, const block& base_block,
                                                 uint64_t round) {
  if (base_block.chain_id != 0) return std::nullopt;
  const block_tree& base = trees[0];
  uint64_t rank = base.depth(base_block.id);
  if (rank <= state.last.base_rank) raise(errc::stale_block, base_block.id.short_hex());
  if (rank != state.last.base_rank + state.config.epoch_e) return std::nullopt;

  auto view = pc_base_view(state, base);
  auto chain = select_main_chain(base, view);
  if (rank >= chain.size() || chain[rank] != base_block.id) return std::nullopt;

  return pc_emit(trees, state, base_block.id, round);
}

std::optional<pc_certificate> pc_scan(const std::vector<block_tree>& trees, pc_state& state,
                                      uint64_t round) {
  const block_tree& base = trees[0];
  auto view = pc_base_view(state, base);
  auto chain = select_main_chain(base, view);
  uint64_t trigger_rank = state.last.base_rank + state.config.epoch_e;
  if (chain.size() <= trigger_rank) return std::nullopt;
  return pc_checkpoint_step(trees, state, base.get(chain[trigger_rank]), round);
}

pc_certificate pc_closing_certificate(const std::vector<block_tree>& trees, pc_state& state,
                                      const block_id& base_tip, uint64_t round) {
  // The closing sweep also takes base descendants of the tip.
  return pc_emit(trees, state, base_tip, round, /*closing=*/true);
}

aggregate_ledger pc_build_ledger(const std::vector<block_tree>& trees,
                                 const std::vector<pc_certificate>& certs, uint32_t window_c) {
  const block_tree& base = trees[0];

  std::vector<certificate> core_certs;
  core_certs.reserve(certs.size());
  for (const auto& c : certs) core_certs.push_back(c.to_core_certificate());

  // Segment boundaries come from the canonical base chain under the last
  // certificate, which runs through every referring block.
  checkpoint_view view{core_certs.back(), std::nullopt, window_c, window_c + 1};
  refresh_view(view, base);
  std::vector<block_id> final_chain = select_main_chain(base, view);
  auto referring =
      referring_blocks_on_chain(base, core_certs, final_chain, window_c, /*pending_tail=*/true);
  auto order = build_block_order(base, core_certs, referring);

  auto lookup = [&trees](const block_id& id) -> const block& {
    for (const auto& tree : trees) {
      if (tree.contains(id)) return tree.get(id);
    }
    raise(errc::unknown_block, id.short_hex());
  };

  aggregate_ledger ledger;
  sanitize_extend(ledger, order, lookup);
  return ledger;
}

size_t pc_total_blocks(const std::vector<block_tree>& trees) {
  size_t n = 0;
  for (const auto& t : trees) n += t.size();
  return n;
}

} // namespace advocate
