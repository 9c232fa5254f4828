#pragma once

#include <advocate/checkpoint_service.hpp>
#include <advocate/merkle.hpp>

#include <optional>
#include <set>

namespace advocate {

// Committee parameters. The BFT protocol itself is abstracted as an ordered
// log with a bounded finalization delay; the honest-supermajority condition
// is still validated because the witness quorum is expressed against it.
struct bft_config {
  uint32_t n = 4;
  uint32_t f = 1;
  uint32_t delta_bft = 0;

  void validate() const {
    if (n < 3 * f + 1) raise(errc::config_error, "committee requires n >= 3f+1");
  }
};

// One entry of the SMR reference chain.
struct smr_tx {
  enum class tx_kind : uint8_t { block_reference, checkpoint };
  tx_kind kind = tx_kind::block_reference;

  // block_reference: <Blockhash, Depth>
  block_id block;
  uint64_t depth = 0;

  // checkpoint: tC_i = {H(B_i), M(R_i)}
  uint64_t cert_index = 0;
  block_id merkle_of_refs;

  uint64_t posted_round = 0;
  uint64_t finalized_round = 0; // posted_round + delta_bft
};

struct smr_chain {
  std::vector<smr_tx> entries;

  size_t finalized_upto(uint64_t round) const; // count of entries final at `round`
  std::string dump() const;                    // structured text, one entry per line
};

// N_uni pending message: held by the validity handler until every referenced
// block is locally known, at most delta rounds.
struct pending_message {
  std::optional<smr_tx> smr_payload;
  std::optional<certificate> cert_payload;
  uint64_t arrived_round = 0;
  uint64_t deadline = 0; // arrived_round + delta
  bool validated = false;
};

enum class delivery_status : uint8_t { delivered, deferred, rejected };

// Three-level message handling: the network handler has completed (the message
// is downloaded); this is the validity handler. Delivered messages are
// instantaneously valid for the BFT thereafter.
delivery_status nuni_deliver(pending_message& msg, const block_tree& local_tree, uint64_t round);

// The federated checkpointing service: the single-node state machine plus the
// SMR reference chain. Committee replicas are full nodes sharing one
// deterministic observer view, so one state object stands in for the quorum.
struct bft_service {
  bft_config config;
  service_state base; // epoch/window/referenced-set bookkeeping, shared rules
  smr_chain chain;
  std::set<block_id> posted; // block-reference dedup

  struct pending_checkpoint {
    size_t tc_entry = 0;               // index of the tC entry on the SMR chain
    block_id candidate;                // B_i
    std::vector<block_id> references;  // R_i snapshot at tC posting
  };
  std::optional<pending_checkpoint> pending;
};

bft_service make_bft_service(bft_config config, uint32_t epoch_e, uint32_t window_c,
                             uint32_t chain_id = 0);

// Posts a <Blockhash, Depth> reference for a newly received valid block.
// Duplicates are dropped silently.
//
// errors: CheckpointConflict when the block sits exactly at the next trigger
// height on a branch that does not contain the latest checkpointed block;
// InvalidBlock when it embeds a certificate with a bad signature.
void smr_post_block_reference(bft_service& svc, const block_tree& tree, const block& b,
                              uint64_t round);

// Trigger and emission, split by finalization:
//  - when a finalized block reference sits at depth(prev)+e on the committee's
//    main chain, the checkpoint transaction tC_i is posted with the reference
//    list snapshotted from the SMR entries up to the trigger;
//  - the certificate (tC_i, R_i, witness) is returned only once tC_i itself is
//    finalized.
std::optional<certificate> smr_emit_checkpoint(bft_service& svc, const block_tree& tree,
                                               uint64_t round);

// Closing certificate over the committee view; spans everything posted.
certificate bft_closing_certificate(bft_service& svc, const block_tree& tree, const block_id& tip,
                                    uint64_t round);

// Latency decomposition: total rounds from generation to confirmation given
// the mining, posting, finalization and checkpoint components.
//
// errors: NegativeComponent.
int64_t transaction_latency(int64_t tau_m, int64_t tau_t, int64_t tau_f, int64_t tau_c);

} // namespace advocate
