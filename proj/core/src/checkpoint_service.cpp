#include <advocate/checkpoint_service.hpp>

#include <algorithm>

namespace advocate {

certificate bootstrap_certificate(uint32_t chain_id) {
  certificate c0;
  c0.index = 0;
  c0.checkpointed_block = make_genesis(chain_id).id;
  c0.references = {c0.checkpointed_block};
  c0.signature = mock_signature{0, true};
  c0.issued_round = 0;
  return c0;
}

service_state make_service_state(uint32_t epoch_e, uint32_t window_c,
                                 std::optional<uint32_t> hook_t, uint32_t service_delay,
                                 uint32_t chain_id) {
  service_state st;
  st.last_cert = bootstrap_certificate(chain_id);
  st.referenced_blocks.insert(st.last_cert.checkpointed_block);
  st.hook_t = hook_t;
  st.service_delay = service_delay;
  st.epoch_e = epoch_e;
  st.window_c = window_c;
  return st;
}

std::vector<block_id> collect_references(const service_state& state, const block_tree& tree,
                                         const block_id& candidate, uint64_t new_index,
                                         bool include_descendants) {
  std::set<block_id> on_chain;
  for (const auto& id : tree.path_from_genesis(candidate)) on_chain.insert(id);

  // Descendants of the candidate belong to the next epoch; the referring
  // block will land among them.
  std::set<block_id> below;
  if (!include_descendants) {
    std::vector<block_id> stack{candidate};
    while (!stack.empty()) {
      block_id cur = stack.back();
      stack.pop_back();
      for (const auto& child : tree.children(cur)) {
        below.insert(child);
        stack.push_back(child);
      }
    }
  }

  std::set<block_id> picked;
  for (const auto& id : tree.all_ids()) {
    if (state.referenced_blocks.count(id) || on_chain.count(id) || below.count(id)) continue;
    if (state.hook_t) {
      const block& b = tree.get(id);
      uint64_t hook = b.hook.value_or(0);
      if (new_index > hook + *state.hook_t) continue; // hook expired
    }
    picked.insert(id);
  }
  return canonical_block_order(picked, tree);
}

namespace {

certificate emit(service_state& state, const block_tree& tree, const block_id& candidate,
                 uint64_t round, bool closing = false) {
  certificate cert;
  cert.index = state.last_cert.index + 1;
  cert.checkpointed_block = candidate;
  cert.references = collect_references(state, tree, candidate, cert.index, closing);
  cert.signature = mock_signature{state.issuer, true};
  cert.issued_round = round;

  for (const auto& id : tree.path_from_genesis(candidate)) state.referenced_blocks.insert(id);
  for (const auto& id : cert.references) state.referenced_blocks.insert(id);
  state.last_cert = cert;
  state.pending.reset();
  return cert;
}

bool on_current_main_chain(const service_state& state, const block_tree& tree,
                           const block_id& id) {
  checkpoint_view view{state.last_cert, std::nullopt, state.window_c, state.epoch_e};
  refresh_view(view, tree);
  auto chain = select_main_chain(tree, view);
  uint64_t d = tree.depth(id);
  return d < chain.size() && chain[d] == id;
}

} // namespace

std::optional<certificate> on_new_block(service_state& state, const block_tree& tree,
                                        const block& b, uint64_t round) {
  uint64_t cp_depth = tree.depth(state.last_cert.checkpointed_block);
  uint64_t b_depth = tree.depth(b.id);
  if (b_depth <= cp_depth) raise(errc::stale_block, b.id.short_hex());

  if (b_depth != cp_depth + state.epoch_e) return std::nullopt;
  if (!on_current_main_chain(state, tree, b.id)) return std::nullopt;

  if (state.service_delay == 0) return emit(state, tree, b.id, round);
  state.pending = service_state::pending_emission{b.id, round + state.service_delay};
  return std::nullopt;
}

std::optional<certificate> service_tick(service_state& state, const block_tree& tree,
                                        uint64_t round) {
  if (!state.pending) return std::nullopt;
  // A reorg past the candidate cancels the pending emission; the new chain is
  // re-evaluated on later blocks.
  if (!on_current_main_chain(state, tree, state.pending->candidate)) {
    state.pending.reset();
    return std::nullopt;
  }
  if (round < state.pending->due_round) return std::nullopt;
  return emit(state, tree, state.pending->candidate, round);
}

std::optional<certificate> service_scan(service_state& state, const block_tree& tree,
                                        uint64_t round) {
  if (state.pending) return service_tick(state, tree, round);

  checkpoint_view view{state.last_cert, std::nullopt, state.window_c, state.epoch_e};
  refresh_view(view, tree);
  auto chain = select_main_chain(tree, view);
  uint64_t trigger_depth = tree.depth(state.last_cert.checkpointed_block) + state.epoch_e;
  if (chain.size() <= trigger_depth) return std::nullopt;
  return on_new_block(state, tree, tree.get(chain[trigger_depth]), round);
}

certificate closing_certificate(service_state& state, const block_tree& tree,
                                const block_id& tip, uint64_t round) {
  return emit(state, tree, tip, round, /*closing=*/true);
}

} // namespace advocate
