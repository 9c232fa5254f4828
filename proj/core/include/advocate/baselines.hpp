#pragma once

#include <advocate/block_tree.hpp>
#include <advocate/rng.hpp>

#include <optional>

namespace advocate {

// Comparison checkpointing schemes. Both issue bare block-hash certificates
// every e main-chain blocks; neither carries a reference list, which is the
// defining difference from the certificate protocol above.
//
//  - stochastic: the certificate is published on chain within c blocks and
//    carries a fresh nonce. The nonce is modeled structurally: a block can
//    embed a checkpoint only if it was mined at or after the checkpoint's
//    issue round, and chains must pass through an embedding block once one is
//    required, so pre-mined extensions die at every checkpoint (a renewal
//    race).
//  - nakamoto: the certificate is distributed off chain; validity is simply
//    "extend the latest checkpointed block". No window, no nonce, no renewal.
struct baseline_state {
  baseline_cert last;
  uint32_t epoch_e = 5;
  uint32_t window_c = 2;
  bool on_chain_embedding = true; // false for the nakamoto variant
  uint32_t issuer = 0;
  prng nonce_rng;
};

baseline_state make_baseline_state(bool on_chain_embedding, uint32_t epoch_e, uint32_t window_c,
                                   uint64_t seed, uint32_t chain_id = 0);

// True iff the block embeds the given checkpoint, the signature is valid, and
// the block was mined no earlier than the checkpoint was issued (the
// structural stand-in for the unpredictable nonce).
bool embeds_checkpoint(const block& b, const baseline_cert& cert);

// Fork choice for the stochastic variant. Mirrors the three-case rule with a
// per-chain embedding test: chains carrying a window-valid embedding of the
// latest checkpoint compete by length; without any embedding the chain may
// grow to (c-1) past the checkpoint so the next block can still publish it.
std::vector<block_id> select_stochastic_chain(const block_tree& tree,
                                              const baseline_state& state);

// Fork choice for the nakamoto variant: longest chain extending the latest
// checkpointed block, ties by ascending tip id.
std::vector<block_id> select_nakamoto_chain(const block_tree& tree, const baseline_state& state);

std::vector<block_id> select_baseline_chain(const block_tree& tree, const baseline_state& state);

// Epoch step shared by both variants: issues a checkpoint when `b` sits at
// depth(last checkpointed) + e on the current main chain (honest or not; this
// is exactly the failure mode where an adversarial chain gets checkpointed).
//
// errors: StaleBlock when the block is at or below the last checkpoint depth.
std::optional<baseline_cert> stochastic_checkpoint_step(const block_tree& tree,
                                                        baseline_state& state, const block& b,
                                                        uint64_t round);
std::optional<baseline_cert> nakamoto_checkpoint_step(const block_tree& tree,
                                                      baseline_state& state, const block& b,
                                                      uint64_t round);

// Once-per-round trigger scan over the current main chain.
std::optional<baseline_cert> baseline_scan(const block_tree& tree, baseline_state& state,
                                           uint64_t round);

// Closing checkpoint at the current tip so runs end on a checkpoint.
baseline_cert baseline_closing_certificate(const block_tree& tree, baseline_state& state,
                                           const block_id& tip, uint64_t round);

} // namespace advocate
