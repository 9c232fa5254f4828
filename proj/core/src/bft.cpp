#include <advocate/bft.hpp>

#include <algorithm>
#include <sstream>

namespace advocate {

size_t smr_chain::finalized_upto(uint64_t round) const {
  size_t n = 0;
  while (n < entries.size() && entries[n].finalized_round <= round) ++n;
  return n;
}

std::string smr_chain::dump() const {
  std::ostringstream os;
  for (size_t i = 0; i < entries.size(); ++i) {
    const smr_tx& e = entries[i];
    if (e.kind == smr_tx::tx_kind::block_reference) {
      os << i << " blockref " << e.block.hex() << " depth=" << e.depth;
    } else {
      os << i << " checkpoint index=" << e.cert_index << " block=" << e.block.hex()
         << " merkle=" << e.merkle_of_refs.hex();
    }
    os << " posted=" << e.posted_round << " finalized=" << e.finalized_round << "\n";
  }
  return os.str();
}

delivery_status nuni_deliver(pending_message& msg, const block_tree& local_tree, uint64_t round) {
  auto have = [&](const block_id& id) { return local_tree.contains(id); };

  bool ok = true;
  if (msg.smr_payload && msg.smr_payload->kind == smr_tx::tx_kind::block_reference) {
    ok = have(msg.smr_payload->block);
  } else if (msg.cert_payload) {
    ok = have(msg.cert_payload->checkpointed_block);
    for (const auto& r : msg.cert_payload->references) ok = ok && have(r);
  }

  if (ok) {
    msg.validated = true;
    return delivery_status::delivered;
  }
  return round < msg.deadline ? delivery_status::deferred : delivery_status::rejected;
}

bft_service make_bft_service(bft_config config, uint32_t epoch_e, uint32_t window_c,
                             uint32_t chain_id) {
  config.validate();
  bft_service svc;
  svc.config = config;
  svc.base = make_service_state(epoch_e, window_c, std::nullopt, 0, chain_id);
  return svc;
}

void smr_post_block_reference(bft_service& svc, const block_tree& tree, const block& b,
                              uint64_t round) {
  if (svc.posted.count(b.id)) return; // same block posted by several replicas

  if (b.embedded_cert && !b.embedded_cert->signature.valid) {
    raise(errc::invalid_block, "embedded certificate signature invalid");
  }

  // No checkpoint conflict: a block at the next trigger height must extend a
  // chain containing the latest checkpointed block.
  const block_id& cp = svc.base.last_cert.checkpointed_block;
  uint64_t trigger_depth = tree.depth(cp) + svc.base.epoch_e;
  uint64_t b_depth = tree.depth(b.id);
  if (b_depth == trigger_depth && !tree.is_ancestor(cp, b.id)) {
    raise(errc::checkpoint_conflict, b.id.short_hex());
  }

  smr_tx entry;
  entry.kind = smr_tx::tx_kind::block_reference;
  entry.block = b.id;
  entry.depth = b_depth;
  entry.posted_round = round;
  entry.finalized_round = round + svc.config.delta_bft;
  svc.chain.entries.push_back(entry);
  svc.posted.insert(b.id);
}

namespace {

certificate finish_certificate(bft_service& svc, const block_tree& tree, const block_id& candidate,
                               std::vector<block_id> references, uint64_t tc_entry,
                               uint64_t round) {
  certificate cert;
  cert.index = svc.base.last_cert.index + 1;
  cert.checkpointed_block = candidate;
  cert.references = std::move(references);
  cert.signature = mock_signature{svc.base.issuer, true};
  cert.merkle_root = merkle_root(cert.references);
  cert.witness = smr_witness{tc_entry, (svc.config.n >= 32) ? 0xffffffffu
                                                            : ((1u << svc.config.n) - 1u)};
  cert.issued_round = round;

  for (const auto& id : tree.path_from_genesis(candidate)) svc.base.referenced_blocks.insert(id);
  for (const auto& id : cert.references) svc.base.referenced_blocks.insert(id);
  svc.base.last_cert = cert;
  svc.pending.reset();
  return cert;
}

} // namespace

std::optional<certificate> smr_emit_checkpoint(bft_service& svc, const block_tree& tree,
                                               uint64_t round) {
  // Emission half: the tC entry must itself be finalized before the
  // certificate leaves the committee.
  if (svc.pending) {
    const smr_tx& tc = svc.chain.entries[svc.pending->tc_entry];
    if (tc.finalized_round > round) return std::nullopt;
    return finish_certificate(svc, tree, svc.pending->candidate,
                              std::move(svc.pending->references), svc.pending->tc_entry, round);
  }

  // Trigger half: a finalized reference at depth(prev)+e on the committee's
  // main chain.
  checkpoint_view view{svc.base.last_cert, std::nullopt, svc.base.window_c, svc.base.epoch_e};
  refresh_view(view, tree);
  auto chain = select_main_chain(tree, view);
  uint64_t trigger_depth =
      tree.depth(svc.base.last_cert.checkpointed_block) + svc.base.epoch_e;
  if (chain.size() <= trigger_depth) return std::nullopt;
  const block_id& candidate = chain[trigger_depth];

  size_t final_count = svc.chain.finalized_upto(round);
  std::optional<size_t> trigger_entry;
  for (size_t i = 0; i < final_count; ++i) {
    const smr_tx& e = svc.chain.entries[i];
    if (e.kind == smr_tx::tx_kind::block_reference && e.block == candidate) {
      trigger_entry = i;
      break;
    }
  }
  if (!trigger_entry) return std::nullopt;

  // R_i: blocks referenced on the SMR chain by the time the checkpoint
  // transaction is assembled that the single-node rule would reference (not
  // yet covered, off the candidate's chain, not in the next epoch).
  std::set<block_id> posted_upto;
  for (const smr_tx& e : svc.chain.entries) {
    if (e.kind == smr_tx::tx_kind::block_reference && e.posted_round <= round) {
      posted_upto.insert(e.block);
    }
  }
  auto full = collect_references(svc.base, tree, candidate, svc.base.last_cert.index + 1);
  std::vector<block_id> refs;
  for (const auto& id : full) {
    if (posted_upto.count(id)) refs.push_back(id);
  }

  smr_tx tc;
  tc.kind = smr_tx::tx_kind::checkpoint;
  tc.cert_index = svc.base.last_cert.index + 1;
  tc.block = candidate;
  tc.merkle_of_refs = merkle_root(refs);
  tc.posted_round = round;
  tc.finalized_round = round + svc.config.delta_bft;
  svc.chain.entries.push_back(tc);
  svc.pending = bft_service::pending_checkpoint{svc.chain.entries.size() - 1, candidate,
                                                std::move(refs)};

  // With an instant log the same call both posts and finalizes.
  if (svc.config.delta_bft == 0) {
    auto pend = *svc.pending;
    return finish_certificate(svc, tree, pend.candidate, std::move(pend.references),
                              pend.tc_entry, round);
  }
  return std::nullopt;
}

certificate bft_closing_certificate(bft_service& svc, const block_tree& tree, const block_id& tip,
                                    uint64_t round) {
  auto refs = collect_references(svc.base, tree, tip, svc.base.last_cert.index + 1,
                                 /*include_descendants=*/true);
  smr_tx tc;
  tc.kind = smr_tx::tx_kind::checkpoint;
  tc.cert_index = svc.base.last_cert.index + 1;
  tc.block = tip;
  tc.merkle_of_refs = merkle_root(refs);
  tc.posted_round = round;
  tc.finalized_round = round + svc.config.delta_bft;
  svc.chain.entries.push_back(tc);
  return finish_certificate(svc, tree, tip, std::move(refs), svc.chain.entries.size() - 1, round);
}

int64_t transaction_latency(int64_t tau_m, int64_t tau_t, int64_t tau_f, int64_t tau_c) {
  if (tau_m < 0 || tau_t < 0 || tau_f < 0 || tau_c < 0) {
    raise(errc::negative_component, "latency components must be non-negative");
  }
  return tau_m + tau_t + tau_f + tau_c;
}

} // namespace advocate
