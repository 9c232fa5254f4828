#pragma once

#include <advocate/fork_choice.hpp>

#include <optional>
#include <set>

namespace advocate {

// The bootstrap certificate C_0: genesis checkpoints itself.
certificate bootstrap_certificate(uint32_t chain_id = 0);

// Single checkpointing party. Watches its local main chain and, every e
// blocks of main-chain depth, issues a certificate referencing every block
// not yet covered by an earlier certificate.
//
// referenced_blocks grows monotonically: once a block is on a checkpointed
// main-chain prefix or in some certificate's reference list it never appears
// in a later reference list.
struct service_state {
  certificate last_cert;
  std::set<block_id> referenced_blocks;
  std::optional<uint32_t> hook_t;   // absent <=> plain mode
  uint32_t service_delay = 0;       // rounds between trigger and emission
  uint32_t epoch_e = 5;
  uint32_t window_c = 2;
  uint32_t issuer = 0;

  // Pending emission while service_delay > 0. Cancelled and re-evaluated if
  // the candidate reorgs off the main chain before the deadline.
  struct pending_emission {
    block_id candidate;
    uint64_t due_round = 0;
  };
  std::optional<pending_emission> pending;
};

service_state make_service_state(uint32_t epoch_e, uint32_t window_c,
                                 std::optional<uint32_t> hook_t = std::nullopt,
                                 uint32_t service_delay = 0, uint32_t chain_id = 0);

// Reference list for a certificate checkpointing `candidate`: every block in
// the tree that is not already referenced, not on the chain up to the
// candidate, and not a descendant of the candidate (descendants belong to the
// next epoch, where the referring block will live). The closing certificate
// sweeps descendants as well, since no next epoch follows it. In hooks mode,
// blocks whose hook index j violates new_index - j > t are excluded as
// expired.
std::vector<block_id> collect_references(const service_state& state, const block_tree& tree,
                                         const block_id& candidate, uint64_t new_index,
                                         bool include_descendants = false);

// Drives the service from a newly arrived block.
//
// @pre the block is inserted in the tree
// @post if the block sits at depth(last checkpointed) + e on the service's
//       current main chain, certificate C_{i+1} is emitted (after
//       service_delay rounds) and the referenced set is extended by the
//       chain prefix and the new references; otherwise nothing is emitted
//
// errors: StaleBlock when the block is at or below the last checkpoint depth.
std::optional<certificate> on_new_block(service_state& state, const block_tree& tree,
                                        const block& b, uint64_t round);

// Re-evaluates a pending delayed emission at the given round. Emits when due
// and still on the main chain; cancels when reorged away.
std::optional<certificate> service_tick(service_state& state, const block_tree& tree,
                                        uint64_t round);

// Trigger driver: finds the block at the next trigger depth on the service's
// current main chain, if any, and runs it through on_new_block. Emits at most
// one certificate per call; callers drain multi-epoch jumps by calling again.
std::optional<certificate> service_scan(service_state& state, const block_tree& tree,
                                        uint64_t round);

// Closing certificate: checkpoints the given chain tip and references
// everything still uncovered, so the final aggregate ledger spans the whole
// tree (hook-expired blocks stay excluded in hooks mode). The run's ledger
// always ends on a checkpoint.
certificate closing_certificate(service_state& state, const block_tree& tree,
                                const block_id& tip, uint64_t round);

} // namespace advocate
