#pragma once

#include <advocate/block_tree.hpp>

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace advocate {

// Ordered transaction sequence after certificate-driven concatenation and
// sanitization.
//
// block_order = Chain_1 || pi(F_1) || Chain-segment_2 || pi(F_2) || ...
// where each segment runs up to and including that certificate's referring
// block and pi(F_i) is the certificate's reference list.
struct aggregate_ledger {
  std::vector<block_id> block_order;
  std::vector<tx_id> tx_order;        // post-sanitization
  std::set<tx_id> spent;              // consumed outputs
  std::map<tx_id, size_t> position;   // surviving txs only
  std::map<block_id, size_t> block_position;
  std::map<tx_id, block_id> tx_block; // surviving occurrence's block
};

// Referring blocks constrained to a specific chain: for each certificate, the
// earliest (depth, then id) block on `chain` that embeds it inside the window.
// The fork-choice search is global; the ledger segmentation is anchored to the
// adopted chain so that segment boundaries never move once the prefix is
// checkpointed. `pending_tail` controls the final certificate: when true and
// no referring block exists yet, the checkpointed block itself closes the
// segment (the closing-certificate case and live views); when false a missing
// referring block raises MissingReferringBlock.
std::map<uint64_t, block_id> referring_blocks_on_chain(const block_tree& tree,
                                                       const std::vector<certificate>& certs,
                                                       const std::vector<block_id>& chain,
                                                       uint32_t window_c, bool pending_tail);

// Concatenates main-chain segments with each certificate's references, in
// certificate order. When `live_tail_chain` is given, the adopted chain's
// blocks past the last segment are appended afterwards (the unstable tail of
// a mid-run view).
//
// @pre every certificate has an entry in `referring`; segments lie on one chain
// @post deterministic; no block appears twice
std::vector<block_id> build_block_order(const block_tree& tree,
                                        const std::vector<certificate>& certs,
                                        const std::map<uint64_t, block_id>& referring,
                                        const std::vector<block_id>* live_tail_chain = nullptr);

// Walks transactions in block order (intra-block order preserved) and drops
// every transaction that duplicates an already-included id or consumes an
// input that is spent or not yet created at its position. Total: invalid
// entries are dropped, never an error. An invalid occurrence does not block a
// later copy of the same transaction from entering once its inputs exist.
aggregate_ledger sanitize(const std::vector<block_id>& block_order, const block_tree& tree);

// Incremental form of sanitize: consumes blocks of `block_order` past the
// point `ledger` has already absorbed. The already-absorbed prefix must be
// unchanged — positions in a sanitized prefix are final.
void sanitize_extend(aggregate_ledger& ledger, const std::vector<block_id>& block_order,
                     const block_tree& tree);

// Same walk with a caller-provided block lookup, for ledgers spanning several
// trees (the parallel-chain variant).
void sanitize_extend(aggregate_ledger& ledger, const std::vector<block_id>& block_order,
                     const std::function<const block&(const block_id&)>& lookup);

// Number of leading block_order positions that are final: the main chain
// through the latest certificate's checkpointed block. References of every
// certificate with a successor sit inside that prefix; the latest
// certificate's own references (and any live tail) lie beyond it.
size_t stable_prefix(const aggregate_ledger& ledger, const std::vector<certificate>& certs);

// Line-oriented dump, one surviving transaction per line:
//   <position> <txid> <block> <origin>
std::string dump_ledger(const aggregate_ledger& ledger, const block_tree& tree);

} // namespace advocate
