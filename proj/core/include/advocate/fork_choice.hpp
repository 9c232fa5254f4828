#pragma once

#include <advocate/block_tree.hpp>

#include <optional>

namespace advocate {

// A node's current checkpoint knowledge: the latest certificate C_i, the
// referring block B_i^r if one exists within the window, and the protocol
// parameters c (window) and e (epoch).
//
// Invariants:
//  - referring_block, when set, is a strict descendant of the checkpointed
//    block with depth difference in [1, c]
//  - epoch_e > window_c, so the safety depth k = e - c is positive
struct checkpoint_view {
  certificate latest_cert;
  std::optional<block_id> referring_block;
  uint32_t window_c = 2;
  uint32_t epoch_e = 5;
};

// Earliest qualifying block embedding certificate `cert` within `window_c`
// blocks of its checkpointed block: lowest depth first, then lowest id. A
// block embedding the certificate more than c blocks past the checkpoint is
// not a referring block.
std::optional<block_id> find_referring_block(const block_tree& tree, const certificate& cert,
                                             uint32_t window_c);

// Refreshes view.referring_block from the tree.
void refresh_view(checkpoint_view& view, const block_tree& tree);

// The modified longest-chain rule, anchored at the latest checkpointed block
// B_i. Returns the selected main chain, genesis -> tip.
//
//  case 1: a referring block B_i^r exists within c blocks of B_i: the longest
//          chain through B_i^r;
//  case 2: no referring block and B_i is not yet c-deep in the longest chain
//          through it: that longest chain;
//  case 3: no referring block and B_i is c-deep: a chain through B_i truncated
//          at depth(B_i) + c - 1, leaving room to still publish the
//          certificate inside the window.
//
// All ties (equal length, case-3 candidates) break by ascending tip id.
//
// errors: UnknownCheckpoint if the checkpointed block is not in the tree.
std::vector<block_id> select_main_chain(const block_tree& tree, const checkpoint_view& view);

// Total validity predicate for a block under the view. False iff
//  (a) the block extends past depth(B_i)+c on a branch whose window contains
//      no referring block, or
//  (b) the block's chain does not contain B_i, or
//  (c) the block embeds a certificate with an invalid signature or embedded
//      past that certificate's window.
//
// @pre block.parent in tree
bool is_block_acceptable(const block_tree& tree, const checkpoint_view& view, const block& b);

// What a miner would produce on top of the current view.
struct block_template {
  block_id parent;
  std::vector<transaction> txs;
  std::optional<certificate> embedded_cert;
  std::optional<uint64_t> hook;
};

// parent = tip of select_main_chain; the certificate rides along iff the
// selected chain does not already carry it inside the window; the template
// takes the whole mempool (callers deduplicate against their ledger view
// first).
block_template next_block_template(const block_tree& tree, const checkpoint_view& view,
                                   std::vector<transaction> mempool, bool hooks_enabled);

} // namespace advocate
