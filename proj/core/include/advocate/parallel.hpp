#pragma once

#include <advocate/fork_choice.hpp>
#include <advocate/ledger.hpp>

#include <optional>
#include <set>

namespace advocate {

// Meta-protocol over M parallel chains. Chain 0 is the base chain; rank is
// depth within a chain, which keeps honest ranks monotonically increasing
// within each chain (the rank criterion). Payload flags mark which chains
// carry transactions.
struct pc_config {
  uint32_t chains = 1;
  uint32_t epoch_e = 5;
  uint32_t window_c = 2;
  std::vector<bool> payload; // Y(m); defaults to all payload-carrying

  bool payload_carrying(uint32_t m) const { return payload.empty() ? true : payload.at(m); }
};

// C_i = {R(~C_i), R_i, B_i}: the checkpointed base-chain block, the reference
// list of payload blocks up to the checkpointed rank, and one anchor tip per
// non-base chain.
struct pc_certificate {
  uint64_t index = 0;
  block_id base_block;   // ~C_i
  uint64_t base_rank = 0;
  std::vector<block_id> references; // ordered by (chain_id, rank, id)
  std::vector<block_id> tips;       // chains 1..M-1; carried forward when a chain
                                    // has not referred to the previous certificate
  mock_signature signature;
  uint64_t issued_round = 0;

  // On-chain embedding uses the single-chain certificate shape; the tips ride
  // with the diffused certificate message.
  certificate to_core_certificate() const;
};

struct pc_state {
  pc_config config;
  pc_certificate last;
  std::set<block_id> referenced;
  uint32_t issuer = 0;
};

pc_state make_pc_state(pc_config config);

// Base-chain view for the single-chain fork-choice rule.
checkpoint_view pc_base_view(const pc_state& state, const block_tree& base_tree);

// The base block embedding certificate `cert` within the window, if any.
std::optional<block_id> pc_referring_base_block(const block_tree& base_tree,
                                                const pc_certificate& cert, uint32_t window_c);

// Validity rules for a block under the current certificate:
//  1. every chain extends its latest checkpoint anchor;
//  2. a base block past rank R(~C_i)+c must descend from an embedding block;
//  3. a non-base block past rank R(~C_i)+c must descend from a block that
//     refers (base_ref) to the certificate-bearing base block;
//  4. (tip eligibility is enforced at certificate creation).
bool pc_block_valid(const std::vector<block_tree>& trees, const pc_state& state, const block& b);

// Reference list for a certificate checkpointing `base_candidate`: every
// not-yet-referenced payload block, where the base chain excludes the
// candidate's own chain prefix and descendants (those enter the ledger as
// chain segments, or belong to the next epoch). Non-base ranks drift ahead
// of the base chain at desk scale, so payload is swept as soon as it is
// known rather than by rank cutoff. Ordered by (chain_id, rank, id).
std::vector<block_id> pc_collect_references(const pc_state& state,
                                            const std::vector<block_tree>& trees,
                                            const block_id& base_candidate);

// Issues C_i when `base_block` sits at rank R(~C_{i-1}) + e on the canonical
// base chain. Tips are each non-base chain's canonical tip, carried forward
// for chains that have not referred to C_{i-1}.
//
// errors: StaleBlock when base_block's rank is at or below the last
// checkpointed rank.
std::optional<pc_certificate> pc_checkpoint_step(const std::vector<block_tree>& trees,
                                                 pc_state& state, const block& base_block,
                                                 uint64_t round);

// Once-per-round trigger scan of the canonical base chain.
std::optional<pc_certificate> pc_scan(const std::vector<block_tree>& trees, pc_state& state,
                                      uint64_t round);

// Closing certificate spanning everything unreferenced on all chains.
pc_certificate pc_closing_certificate(const std::vector<block_tree>& trees, pc_state& state,
                                      const block_id& base_tip, uint64_t round);

// Aggregate ledger: per epoch the base-chain segment through the referring
// base block, then that certificate's references; sanitized as usual.
//
// errors: MissingReferringBlock (final certificate's referring block may be
// pending; the closing certificate anchors itself).
aggregate_ledger pc_build_ledger(const std::vector<block_tree>& trees,
                                 const std::vector<pc_certificate>& certs, uint32_t window_c);

// Block universe for metrics: every id in any chain's tree.
size_t pc_total_blocks(const std::vector<block_tree>& trees);

} // namespace advocate
