#include <advocate/baselines.hpp>

#include <algorithm>

namespace advocate {

baseline_state make_baseline_state(bool on_chain_embedding, uint32_t epoch_e, uint32_t window_c,
                                   uint64_t seed, uint32_t chain_id) {
  baseline_state st;
  st.last.index = 0;
  st.last.checkpointed_block = make_genesis(chain_id).id;
  st.last.signature = mock_signature{0, true};
  st.epoch_e = epoch_e;
  st.window_c = window_c;
  st.on_chain_embedding = on_chain_embedding;
  st.nonce_rng = prng(seed, "baseline-nonce");
  return st;
}

bool embeds_checkpoint(const block& b, const baseline_cert& cert) {
  return b.embedded_checkpoint && b.embedded_checkpoint->index == cert.index &&
         b.embedded_checkpoint->checkpointed_block == cert.checkpointed_block &&
         b.embedded_checkpoint->nonce == cert.nonce && b.embedded_checkpoint->signature.valid &&
         b.round_mined >= cert.issued_round;
}

std::vector<block_id> select_stochastic_chain(const block_tree& tree,
                                              const baseline_state& state) {
  const block_id& cp = state.last.checkpointed_block;
  uint64_t base_depth = tree.depth(cp);

  if (state.last.index == 0) {
    return tree.path_from_genesis(tree.deepest_tip(cp));
  }

  // Embedding blocks inside the window, any branch.
  std::vector<block_id> embedders;
  std::vector<block_id> frontier{cp};
  for (uint32_t step = 1; step <= state.window_c; ++step) {
    std::vector<block_id> next;
    for (const auto& id : frontier) {
      const auto& kids = tree.children(id);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    for (const auto& id : next) {
      if (embeds_checkpoint(tree.get(id), state.last)) embedders.push_back(id);
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }

  if (!embedders.empty()) {
    // Renewal reached: compete only through embedding blocks.
    std::sort(embedders.begin(), embedders.end());
    block_id best_tip;
    uint64_t best_depth = 0;
    bool have = false;
    for (const auto& e : embedders) {
      block_id tip = tree.deepest_tip(e);
      uint64_t d = tree.depth(tip);
      if (!have || d > best_depth || (d == best_depth && tip < best_tip)) {
        best_tip = tip;
        best_depth = d;
        have = true;
      }
    }
    return tree.path_from_genesis(best_tip);
  }

  block_id longest_tip = tree.deepest_tip(cp);
  if (tree.depth(longest_tip) < base_depth + state.window_c) {
    return tree.path_from_genesis(longest_tip);
  }
  auto candidates = tree.descendants_at_depth(cp, base_depth + state.window_c - 1);
  return tree.path_from_genesis(candidates.front());
}

std::vector<block_id> select_nakamoto_chain(const block_tree& tree, const baseline_state& state) {
  return tree.path_from_genesis(tree.deepest_tip(state.last.checkpointed_block));
}

std::vector<block_id> select_baseline_chain(const block_tree& tree, const baseline_state& state) {
  return state.on_chain_embedding ? select_stochastic_chain(tree, state)
                                  : select_nakamoto_chain(tree, state);
}

namespace {

std::optional<baseline_cert> baseline_step(const block_tree& tree, baseline_state& state,
                                           const block& b, uint64_t round) {
  uint64_t cp_depth = tree.depth(state.last.checkpointed_block);
  uint64_t b_depth = tree.depth(b.id);
  if (b_depth <= cp_depth) raise(errc::stale_block, b.id.short_hex());
  if (b_depth != cp_depth + state.epoch_e) return std::nullopt;

  auto chain = select_baseline_chain(tree, state);
  if (b_depth >= chain.size() || chain[b_depth] != b.id) return std::nullopt;

  baseline_cert cert;
  cert.index = state.last.index + 1;
  cert.checkpointed_block = b.id;
  cert.nonce = state.on_chain_embedding ? state.nonce_rng.next() : 0;
  cert.signature = mock_signature{state.issuer, true};
  cert.issued_round = round;
  state.last = cert;
  return cert;
}

} // namespace

std::optional<baseline_cert> stochastic_checkpoint_step(const block_tree& tree,
                                                        baseline_state& state, const block& b,
                                                        uint64_t round) {
  return baseline_step(tree, state, b, round);
}

std::optional<baseline_cert> nakamoto_checkpoint_step(const block_tree& tree,
                                                      baseline_state& state, const block& b,
                                                      uint64_t round) {
  return baseline_step(tree, state, b, round);
}

std::optional<baseline_cert> baseline_scan(const block_tree& tree, baseline_state& state,
                                           uint64_t round) {
  auto chain = select_baseline_chain(tree, state);
  uint64_t trigger_depth = tree.depth(state.last.checkpointed_block) + state.epoch_e;
  if (chain.size() <= trigger_depth) return std::nullopt;
  return baseline_step(tree, state, tree.get(chain[trigger_depth]), round);
}

baseline_cert baseline_closing_certificate(const block_tree& tree, baseline_state& state,
                                           const block_id& tip, uint64_t round) {
  baseline_cert cert;
  cert.index = state.last.index + 1;
  cert.checkpointed_block = tip;
  cert.nonce = state.on_chain_embedding ? state.nonce_rng.next() : 0;
  cert.signature = mock_signature{state.issuer, true};
  cert.issued_round = round;
  state.last = cert;
  (void)tree;
  return cert;
}

} // namespace advocate
