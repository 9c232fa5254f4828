#include <advocate/rng.hpp>
#include <advocate/sim.hpp>

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <sstream>

namespace advocate {

const char* variant_name(protocol_variant v) noexcept {
  switch (v) {
    case protocol_variant::advocate: return "advocate";
    case protocol_variant::advocate_hooks: return "advocate-hooks";
    case protocol_variant::advocate_bft: return "advocate-bft";
    case protocol_variant::advocate_pc: return "advocate-pc";
    case protocol_variant::nakamoto_cp: return "nakamoto-cp";
    case protocol_variant::stochastic_cp: return "stochastic-cp";
  }
  return "?";
}

const char* strategy_name(adversary_strategy s) noexcept {
  switch (s) {
    case adversary_strategy::none: return "none";
    case adversary_strategy::private_mining_bursts: return "private-mining-bursts";
    case adversary_strategy::censorship: return "censorship";
  }
  return "?";
}

protocol_variant parse_variant(const std::string& s) {
  for (auto v : {protocol_variant::advocate, protocol_variant::advocate_hooks,
                 protocol_variant::advocate_bft, protocol_variant::advocate_pc,
                 protocol_variant::nakamoto_cp, protocol_variant::stochastic_cp}) {
    if (s == variant_name(v)) return v;
  }
  raise(errc::config_error, "unknown variant: " + s);
}

adversary_strategy parse_strategy(const std::string& s) {
  for (auto a : {adversary_strategy::none, adversary_strategy::private_mining_bursts,
                 adversary_strategy::censorship}) {
    if (s == strategy_name(a)) return a;
  }
  raise(errc::config_error, "unknown adversary strategy: " + s);
}

void sim_config::validate() const {
  if (beta < 0.0 || beta >= 1.0) raise(errc::config_error, "beta must be in [0,1)");
  if (honest_rate <= 0.0 || honest_rate > 1.0) raise(errc::config_error, "h must be in (0,1]");
  if (window_c < 1) raise(errc::config_error, "c must be >= 1");
  if (epoch_e <= window_c) raise(errc::config_error, "e must exceed c");
  if (delta < 1) raise(errc::config_error, "delta must be >= 1");
  if (rounds == 0) raise(errc::config_error, "rounds must be positive");
  if (parties == 0) raise(errc::config_error, "need at least one honest party");
  if (variant == protocol_variant::advocate_hooks) {
    if (!hook_t || *hook_t < 1) raise(errc::config_error, "hooks variant requires hook_t >= 1");
  } else if (hook_t) {
    raise(errc::config_error, "hook_t only applies to the hooks variant");
  }
  if (variant == protocol_variant::advocate_bft) {
    bft_config{bft_n, bft_f, delta_bft}.validate();
    // Certificates arrive up to two finalization delays late; the publication
    // window has to absorb the inflation (base window 2).
    if (window_c < 2 + delta_bft) {
      raise(errc::config_error, "bft variant requires c >= 2 + delta_bft");
    }
  } else if (delta_bft != 0) {
    raise(errc::config_error, "delta_bft only applies to the bft variant");
  }
  if (variant == protocol_variant::advocate_pc) {
    if (chains < 1) raise(errc::config_error, "parallel-chain variant needs chains >= 1");
    if (adversary == adversary_strategy::private_mining_bursts) {
      raise(errc::config_error, "private-mining bursts are not modeled for parallel chains");
    }
  } else if (chains != 1) {
    raise(errc::config_error, "chains > 1 only applies to the parallel-chain variant");
  }
}

std::string sim_config::describe() const {
  std::ostringstream os;
  os << variant_name(variant) << " beta=" << beta << " h=" << honest_rate << " e=" << epoch_e
     << " c=" << window_c;
  if (hook_t) os << " t=" << *hook_t;
  os << " delta=" << delta;
  if (variant == protocol_variant::advocate_bft) os << " delta_bft=" << delta_bft;
  if (variant == protocol_variant::advocate_pc) os << " M=" << chains;
  os << " rounds=" << rounds << " seed=" << seed << " adversary=" << strategy_name(adversary);
  return os.str();
}

// ---------------------------------------------------------------------------
// event log serialization

namespace {

using nlohmann::json;

json event_to_json(const sim_event& e) {
  json j;
  j["round"] = e.round;
  std::visit(
      [&](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, ev_block_mined>) {
          j["type"] = "block_mined";
          j["id"] = ev.id.hex();
          j["parent"] = ev.parent.hex();
          j["miner"] = miner_class_name(ev.miner);
          j["chain"] = ev.chain;
          j["depth"] = ev.depth;
          j["txs"] = ev.tx_count;
          j["embeds_cert"] = ev.embeds_cert;
          j["ledger_len"] = ev.ledger_len_at_creation;
          j["released"] = ev.released;
        } else if constexpr (std::is_same_v<T, ev_block_received>) {
          j["type"] = "block_received";
          j["id"] = ev.id.hex();
          j["party"] = ev.party;
        } else if constexpr (std::is_same_v<T, ev_cert_emitted>) {
          j["type"] = "cert_emitted";
          j["index"] = ev.index;
          j["block"] = ev.checkpointed.hex();
          j["refs"] = ev.ref_count;
          j["closing"] = ev.closing;
        } else if constexpr (std::is_same_v<T, ev_cert_adopted>) {
          j["type"] = "cert_adopted";
          j["index"] = ev.index;
          j["party"] = ev.party;
        } else if constexpr (std::is_same_v<T, ev_tx_generated>) {
          j["type"] = "tx_generated";
          j["id"] = ev.id.hex();
        } else if constexpr (std::is_same_v<T, ev_tx_confirmed>) {
          j["type"] = "tx_confirmed";
          j["id"] = ev.id.hex();
          j["generated_round"] = ev.generated_round;
          j["position"] = ev.position;
        } else if constexpr (std::is_same_v<T, ev_tx_mined>) {
          j["type"] = "tx_mined";
          j["id"] = ev.id.hex();
          j["block"] = ev.in_block.hex();
        } else if constexpr (std::is_same_v<T, ev_stable_advanced>) {
          j["type"] = "stable_advanced";
          j["party"] = ev.party;
          j["length"] = ev.block_prefix_len;
        } else if constexpr (std::is_same_v<T, ev_burst_released>) {
          j["type"] = "burst_released";
          j["count"] = ev.count;
          j["fork_depth"] = ev.fork_depth;
        } else if constexpr (std::is_same_v<T, ev_smr_posted>) {
          j["type"] = "smr_posted";
          j["entry"] = ev.entry;
          j["block"] = ev.block.hex();
          j["depth"] = ev.depth;
          j["kind"] = ev.checkpoint_kind ? "checkpoint" : "blockref";
          j["finalized_round"] = ev.finalized_round;
        } else if constexpr (std::is_same_v<T, ev_run_closed>) {
          j["type"] = "run_closed";
          j["final_cert"] = ev.final_cert_index;
        }
      },
      e.data);
  return j;
}

} // namespace

std::string event_log::to_ndjson() const {
  std::string out;
  for (const auto& e : events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// engine

namespace {

struct block_msg {
  block b;
};
struct cert_msg {
  certificate cert;
};
struct baseline_msg {
  baseline_cert cert;
};
struct pc_cert_msg {
  pc_certificate cert;
};
using message = std::variant<block_msg, cert_msg, baseline_msg, pc_cert_msg>;

// An honest node's local state. The checkpoint observer (service, committee,
// baseline issuer) reuses the same structure without the mining parts.
struct party_view {
  std::vector<block_tree> trees;

  std::vector<certificate> certs;
  std::vector<baseline_cert> baseline_certs;
  std::vector<pc_certificate> pc_certs;

  struct pending_adoption {
    message msg;
    uint64_t deadline;
  };
  std::deque<pending_adoption> pending;

  std::map<uint64_t, transaction> mempool; // keyed by generation sequence
  std::set<tx_id> included_txids;          // txs carried by any known block
  uint64_t refs_total = 0;                 // adopted reference-list sizes

  std::vector<block_id> stable_order;
  std::vector<uint64_t> stable_hash; // rolling prefix hashes, size+1 entries
  std::set<block_id> stable_seen;
  size_t stable_cert_count = 0; // certificates whose checkpointed block is covered
  bool stable_dirty = true;

  // party 0 keeps the sanitized stable ledger for confirmation accounting
  aggregate_ledger stable_ledger;
};

uint64_t hash_step(uint64_t acc, const block_id& id) {
  uint64_t h = acc ^ 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < 8; ++i) h = (h ^ id.bytes[i * 4]) * 0x100000001b3ULL;
  return h;
}

struct adversary_state {
  party_view view; // rushing: superset view, updated the moment objects exist
  std::vector<block> private_blocks;
  block_id fork_base; // epoch anchor: release spans are measured from here
  block_id mine_tip;  // parent for the next private block when none are pending
  std::vector<std::optional<block_id>> censor_tips; // per-chain own tip
  uint64_t last_seen_cert = 0;
};

class simulation {
public:
  explicit simulation(const sim_config& cfg)
      : cfg_(cfg),
        lottery_honest_(cfg.seed, "lottery-honest"),
        lottery_adv_(cfg.seed, "lottery-adversary"),
        attribution_(cfg.seed, "attribution"),
        sortition_(cfg.seed, "sortition") {}

  sim_result run();

private:
  void init();
  void deliver_due(uint64_t round);
  void generate_txs(uint64_t round);
  void honest_mining(uint64_t round);
  void adversary_step(uint64_t round);
  void service_step(uint64_t round);
  void assertions(uint64_t round);
  void close_out();

  uint32_t chain_count() const {
    return cfg_.variant == protocol_variant::advocate_pc ? cfg_.chains : 1;
  }
  bool certificate_family() const {
    return cfg_.variant == protocol_variant::advocate ||
           cfg_.variant == protocol_variant::advocate_hooks ||
           cfg_.variant == protocol_variant::advocate_bft;
  }
  bool baseline_family() const {
    return cfg_.variant == protocol_variant::nakamoto_cp ||
           cfg_.variant == protocol_variant::stochastic_cp;
  }
  bool pc_mode() const { return cfg_.variant == protocol_variant::advocate_pc; }

  void schedule(uint64_t round, message msg) { schedule_[round].push_back(std::move(msg)); }
  void ingest(party_view& view, uint32_t party_idx, const message& msg, uint64_t round,
              bool rushing);
  bool try_adopt_one(party_view& view, uint32_t party_idx, const message& msg, uint64_t round);
  void try_adoptions(party_view& view, uint32_t party_idx, uint64_t round);
  void broadcast_cert(const message& msg, uint64_t round);

  std::vector<block_id> party_main_chain(const party_view& view, uint32_t chain) const;
  pc_state pc_view_of(const party_view& view) const;
  checkpoint_view make_view(const party_view& view) const;
  baseline_state baseline_view_of(const party_view& view) const;
  uint64_t live_ledger_len(const party_view& view) const;
  const block& lookup_block(const party_view& view, const block_id& id) const;

  block build_block(party_view& view, uint64_t round, uint32_t chain, miner_class cls,
                    std::vector<transaction> txs,
                    const std::vector<block_id>& mining_chain) const;
  std::vector<transaction> collect_mempool(party_view& view);

  block make_private_block(uint64_t round);
  block make_censor_block(uint64_t round, uint32_t chain);
  block_id censor_anchor(uint32_t chain) const;
  void maybe_refork(uint64_t round);
  void release_private(uint64_t round);
  void release_prefix(uint64_t round, uint64_t max_depth);
  uint64_t observer_public_depth() const;
  void post_new_blocks_to_smr(uint64_t round);

  void recompute_stable(party_view& view, uint32_t party_idx, uint64_t round);
  void note_seen(const block_id& id, uint64_t round, bool cert_key = false);

  sim_config cfg_;
  prng lottery_honest_, lottery_adv_, attribution_, sortition_;

  std::vector<party_view> parties_;
  party_view observer_;

  service_state svc_;
  bft_service bft_;
  baseline_state base_svc_;
  pc_state pc_;

  adversary_state adv_;
  bool private_tip_valid_ = false;

  std::map<uint64_t, std::vector<message>> schedule_;
  uint64_t tx_seq_ = 0;
  std::map<tx_id, uint64_t> tx_generated_round_;
  std::set<tx_id> mined_once_;
  std::vector<block_id> observer_new_blocks_;
  bool closing_ = false;

  std::map<std::string, std::pair<uint64_t, uint64_t>> seen_span_;

  event_log log_;
  bool safety_ok_ = true;
  uint64_t honest_mined_ = 0, adv_mined_ = 0;
};

void simulation::note_seen(const block_id& id, uint64_t round, bool cert_key) {
  std::string key = (cert_key ? "c:" : "b:") + id.hex();
  auto it = seen_span_.find(key);
  if (it == seen_span_.end()) {
    seen_span_.emplace(key, std::make_pair(round, round));
  } else {
    it->second.second = std::max(it->second.second, round);
  }
}

void simulation::init() {
  uint32_t m = chain_count();
  auto setup_view = [&](party_view& v) {
    v.trees.resize(m);
    for (uint32_t c = 0; c < m; ++c) v.trees[c].insert_block(make_genesis(c));
    if (certificate_family()) {
      v.certs.push_back(bootstrap_certificate(0));
      v.refs_total = 1;
    } else if (pc_mode()) {
      v.pc_certs.push_back(make_pc_state(pc_config{cfg_.chains, cfg_.epoch_e, cfg_.window_c, {}}).last);
      v.refs_total = 1;
    } else {
      v.baseline_certs.push_back(
          make_baseline_state(cfg_.variant == protocol_variant::stochastic_cp, cfg_.epoch_e,
                              cfg_.window_c, cfg_.seed)
              .last);
      v.refs_total = 0;
    }
  };

  parties_.resize(cfg_.parties);
  for (auto& p : parties_) setup_view(p);
  setup_view(observer_);
  setup_view(adv_.view);

  switch (cfg_.variant) {
    case protocol_variant::advocate:
    case protocol_variant::advocate_hooks:
      svc_ = make_service_state(cfg_.epoch_e, cfg_.window_c, cfg_.hook_t, cfg_.service_delay);
      break;
    case protocol_variant::advocate_bft:
      bft_ = make_bft_service(bft_config{cfg_.bft_n, cfg_.bft_f, cfg_.delta_bft}, cfg_.epoch_e,
                              cfg_.window_c);
      break;
    case protocol_variant::advocate_pc:
      pc_ = make_pc_state(pc_config{cfg_.chains, cfg_.epoch_e, cfg_.window_c, {}});
      break;
    case protocol_variant::nakamoto_cp:
    case protocol_variant::stochastic_cp:
      base_svc_ = make_baseline_state(cfg_.variant == protocol_variant::stochastic_cp,
                                      cfg_.epoch_e, cfg_.window_c, cfg_.seed);
      break;
  }

  adv_.fork_base = make_genesis(0).id;
  adv_.mine_tip = adv_.fork_base;
  adv_.censor_tips.assign(m, std::nullopt);
}

const block& simulation::lookup_block(const party_view& view, const block_id& id) const {
  for (const auto& tree : view.trees) {
    if (tree.contains(id)) return tree.get(id);
  }
  raise(errc::unknown_block, id.short_hex());
}

void simulation::ingest(party_view& view, uint32_t party_idx, const message& msg, uint64_t round,
                        bool rushing) {
  if (const auto* bm = std::get_if<block_msg>(&msg)) {
    block_tree& tree = view.trees[bm->b.chain_id];
    if (tree.contains(bm->b.id)) return;
    tree.insert_block(bm->b);
    // The ledger view for mempool pruning: every transaction already carried
    // by a known block. Under the certificate protocols those blocks all end
    // up in the ledger; the baselines simply lose whatever lands off chain.
    for (const auto& tx : bm->b.txs) view.included_txids.insert(tx.id);
    if (&view == &observer_ && cfg_.variant == protocol_variant::advocate_bft) {
      observer_new_blocks_.push_back(bm->b.id);
    }
    if (!rushing) {
      log_.push(round, ev_block_received{bm->b.id, party_idx});
      note_seen(bm->b.id, round);
    }
    return;
  }
  // Certificates may reference blocks still in flight; defer up to delta
  // rounds (the validBlock handshake), then reject.
  if (!try_adopt_one(view, party_idx, msg, round)) {
    view.pending.push_back(party_view::pending_adoption{msg, round + cfg_.delta});
  }
}

bool simulation::try_adopt_one(party_view& view, uint32_t party_idx, const message& msg,
                               uint64_t round) {
  auto have = [&](uint32_t chain, const block_id& id) { return view.trees[chain].contains(id); };

  if (const auto* cm = std::get_if<cert_msg>(&msg)) {
    const certificate& cert = cm->cert;
    if (cert.index != view.certs.size()) return cert.index < view.certs.size();
    if (!cert.signature.valid) return true; // drop, never adopt
    if (!have(0, cert.checkpointed_block)) return false;
    for (const auto& r : cert.references) {
      if (!have(0, r)) return false;
    }
    const block_tree& tree = view.trees[0];
    if (!tree.is_ancestor(view.certs.back().checkpointed_block, cert.checkpointed_block)) {
      safety_ok_ = false; // checkpoint monotonicity broken
    }
    view.certs.push_back(cert);
    view.refs_total += cert.references.size();
    for (const auto& rid : cert.references) {
      for (const auto& tx : tree.get(rid).txs) view.included_txids.insert(tx.id);
    }
    view.stable_dirty = true;
    if (party_idx < cfg_.parties) log_.push(round, ev_cert_adopted{cert.index, party_idx});
    return true;
  }
  if (const auto* bm = std::get_if<baseline_msg>(&msg)) {
    const baseline_cert& cert = bm->cert;
    if (cert.index != view.baseline_certs.size()) return cert.index < view.baseline_certs.size();
    if (!cert.signature.valid) return true;
    if (!have(0, cert.checkpointed_block)) return false;
    view.baseline_certs.push_back(cert);
    view.stable_dirty = true;
    if (party_idx < cfg_.parties) log_.push(round, ev_cert_adopted{cert.index, party_idx});
    return true;
  }
  if (const auto* pm = std::get_if<pc_cert_msg>(&msg)) {
    const pc_certificate& cert = pm->cert;
    if (cert.index != view.pc_certs.size()) return cert.index < view.pc_certs.size();
    if (!cert.signature.valid) return true;
    if (!have(0, cert.base_block)) return false;
    for (const auto& r : cert.references) {
      bool found = false;
      for (const auto& tree : view.trees) found = found || tree.contains(r);
      if (!found) return false;
    }
    for (size_t m = 0; m + 1 < view.trees.size() && m < cert.tips.size(); ++m) {
      if (!have(static_cast<uint32_t>(m + 1), cert.tips[m])) return false;
    }
    view.pc_certs.push_back(cert);
    view.refs_total += cert.references.size();
    for (const auto& rid : cert.references) {
      for (const auto& tx : lookup_block(view, rid).txs) view.included_txids.insert(tx.id);
    }
    view.stable_dirty = true;
    if (party_idx < cfg_.parties) log_.push(round, ev_cert_adopted{cert.index, party_idx});
    return true;
  }
  return true;
}

void simulation::try_adoptions(party_view& view, uint32_t party_idx, uint64_t round) {
  for (int pass = 0; pass < 2; ++pass) {
    for (auto it = view.pending.begin(); it != view.pending.end();) {
      if (try_adopt_one(view, party_idx, it->msg, round)) {
        it = view.pending.erase(it);
      } else if (round >= it->deadline) {
        it = view.pending.erase(it); // validBlock timeout; honest traffic never hits this
      } else {
        ++it;
      }
    }
  }
}

void simulation::deliver_due(uint64_t round) {
  auto it = schedule_.find(round);
  if (it != schedule_.end()) {
    std::vector<message>& msgs = it->second;
    // Blocks land before certificates; production order within a chain is
    // already parent-before-child.
    std::stable_sort(msgs.begin(), msgs.end(), [](const message& a, const message& b) {
      bool ba = std::holds_alternative<block_msg>(a);
      bool bb = std::holds_alternative<block_msg>(b);
      return ba && !bb;
    });
    for (const auto& msg : msgs) {
      for (uint32_t i = 0; i < cfg_.parties; ++i) ingest(parties_[i], i, msg, round, false);
      ingest(observer_, cfg_.parties, msg, round, false);
    }
    schedule_.erase(it);
  }
  for (uint32_t i = 0; i < cfg_.parties; ++i) try_adoptions(parties_[i], i, round);
  try_adoptions(observer_, cfg_.parties, round);
  try_adoptions(adv_.view, cfg_.parties + 1, round);
}

void simulation::generate_txs(uint64_t round) {
  for (uint32_t k = 0; k < cfg_.tx_rate; ++k) {
    transaction tx = transaction::make({}, 1, round, miner_class::honest, tx_seq_);
    tx_generated_round_[tx.id] = round;
    log_.push(round, ev_tx_generated{tx.id});
    for (auto& p : parties_) p.mempool.emplace(tx_seq_, tx);
    adv_.view.mempool.emplace(tx_seq_, tx);
    ++tx_seq_;
  }
}

pc_state simulation::pc_view_of(const party_view& view) const {
  pc_state st;
  st.config = pc_config{cfg_.chains, cfg_.epoch_e, cfg_.window_c, {}};
  st.last = view.pc_certs.back();
  return st;
}

checkpoint_view simulation::make_view(const party_view& view) const {
  checkpoint_view v{view.certs.back(), std::nullopt, cfg_.window_c, cfg_.epoch_e};
  refresh_view(v, view.trees[0]);
  return v;
}

baseline_state simulation::baseline_view_of(const party_view& view) const {
  baseline_state st;
  st.last = view.baseline_certs.back();
  st.epoch_e = cfg_.epoch_e;
  st.window_c = cfg_.window_c;
  st.on_chain_embedding = cfg_.variant == protocol_variant::stochastic_cp;
  return st;
}

std::vector<block_id> simulation::party_main_chain(const party_view& view, uint32_t chain) const {
  if (pc_mode()) {
    pc_state st = pc_view_of(view);
    if (chain == 0) {
      auto v = pc_base_view(st, view.trees[0]);
      return select_main_chain(view.trees[0], v);
    }
    block_id anchor = st.last.tips.at(chain - 1);
    return view.trees[chain].path_from_genesis(view.trees[chain].deepest_tip(anchor));
  }
  if (baseline_family()) {
    return select_baseline_chain(view.trees[0], baseline_view_of(view));
  }
  checkpoint_view v = make_view(view);
  return select_main_chain(view.trees[0], v);
}

uint64_t simulation::live_ledger_len(const party_view& view) const {
  uint64_t chain_len = party_main_chain(view, 0).size();
  // References never overlap the adopted chain except genesis in the
  // bootstrap certificate's list.
  return chain_len + (view.refs_total > 0 ? view.refs_total - 1 : 0);
}

std::vector<transaction> simulation::collect_mempool(party_view& view) {
  std::vector<transaction> txs;
  for (auto it = view.mempool.begin(); it != view.mempool.end();) {
    if (view.included_txids.count(it->second.id)) {
      it = view.mempool.erase(it); // already carried by a known block
      continue;
    }
    txs.push_back(it->second);
    ++it;
  }
  return txs;
}

block simulation::build_block(party_view& view, uint64_t round, uint32_t chain, miner_class cls,
                              std::vector<transaction> txs,
                              const std::vector<block_id>& mining_chain) const {
  if (pc_mode()) {
    pc_state st = pc_view_of(view);
    if (chain == 0) {
      auto v = pc_base_view(st, view.trees[0]);
      auto tmpl = next_block_template(view.trees[0], v, std::move(txs), false);
      if (tmpl.embedded_cert) {
        tmpl.embedded_cert->references.clear(); // compact on-chain publication
        tmpl.embedded_cert->merkle_root.reset();
        tmpl.embedded_cert->witness.reset();
      }
      return block::make(tmpl.parent, cls, std::move(tmpl.txs), round, tmpl.embedded_cert);
    }
    std::optional<block_id> base_ref;
    if (auto referring = pc_referring_base_block(view.trees[0], st.last, cfg_.window_c)) {
      base_ref = *referring;
    }
    return block::make(mining_chain.back(), cls, std::move(txs), round, std::nullopt,
                       std::nullopt, std::nullopt, chain, base_ref);
  }
  if (baseline_family()) {
    std::optional<baseline_cert> embed;
    const baseline_cert& latest = view.baseline_certs.back();
    if (cfg_.variant == protocol_variant::stochastic_cp && latest.index > 0) {
      bool embedded = false;
      uint64_t base_depth = view.trees[0].depth(latest.checkpointed_block);
      for (uint64_t d = base_depth + 1;
           d <= base_depth + cfg_.window_c && d < mining_chain.size(); ++d) {
        embedded = embedded || embeds_checkpoint(view.trees[0].get(mining_chain[d]), latest);
      }
      if (!embedded) embed = latest;
    }
    return block::make(mining_chain.back(), cls, std::move(txs), round, std::nullopt, embed);
  }
  checkpoint_view v = make_view(view);
  auto tmpl = next_block_template(view.trees[0], v, std::move(txs),
                                  cfg_.variant == protocol_variant::advocate_hooks);
  if (tmpl.embedded_cert) {
    // The on-chain copy is the compact publication; the reference list,
    // Merkle root and witness stay with the certificate message.
    tmpl.embedded_cert->references.clear();
    tmpl.embedded_cert->merkle_root.reset();
    tmpl.embedded_cert->witness.reset();
  }
  return block::make(tmpl.parent, cls, std::move(tmpl.txs), round, tmpl.embedded_cert,
                     std::nullopt, tmpl.hook);
}

void simulation::honest_mining(uint64_t round) {
  if (!lottery_honest_.bernoulli(cfg_.honest_rate)) return;
  uint32_t winner = static_cast<uint32_t>(attribution_.next_below(cfg_.parties));
  uint32_t chain = 0;
  if (pc_mode() && cfg_.chains > 1) {
    chain = static_cast<uint32_t>(sortition_.next_below(cfg_.chains));
  }

  party_view& p = parties_[winner];
  std::vector<block_id> mining_chain = party_main_chain(p, chain);
  std::vector<transaction> txs = collect_mempool(p);
  uint64_t ledger_len = live_ledger_len(p);
  block b = build_block(p, round, chain, miner_class::honest, std::move(txs), mining_chain);

  ++honest_mined_;
  log_.push(round, ev_block_mined{b.id, b.parent, miner_class::honest, b.chain_id,
                                  p.trees[b.chain_id].depth(b.parent) + 1,
                                  static_cast<uint32_t>(b.txs.size()),
                                  b.embedded_cert.has_value() || b.embedded_checkpoint.has_value(),
                                  ledger_len, true});
  log_.push(round, ev_block_received{b.id, winner}); // the miner holds it immediately
  for (const auto& tx : b.txs) {
    if (mined_once_.insert(tx.id).second) log_.push(round, ev_tx_mined{tx.id, b.id});
  }

  p.trees[b.chain_id].insert_block(b);
  for (const auto& tx : b.txs) p.included_txids.insert(tx.id);
  note_seen(b.id, round);
  if (!adv_.view.trees[b.chain_id].contains(b.id)) {
    adv_.view.trees[b.chain_id].insert_block(b); // rushing
  }
  schedule(round + cfg_.delta, block_msg{b});
}

// Embedding decision for an adversarial chain-0 block extending `parent`:
// embed the latest certificate when the branch lacks it and the new block
// still fits the window, mirroring the honest rule. Returns false when the
// branch has missed the window and can no longer carry the publication.
static bool adversarial_embeds(const block_tree& tree, const party_view& view,
                               protocol_variant variant, uint32_t window_c, block_id parent,
                               std::optional<certificate>& embed,
                               std::optional<baseline_cert>& embed_cp,
                               std::optional<uint64_t>& hook) {
  auto branch_has = [&](auto&& pred, uint64_t base_depth) {
    block_id cur = parent;
    uint64_t d = tree.depth(parent);
    while (d > base_depth) {
      if (pred(tree.get(cur))) return true;
      cur = tree.get(cur).parent;
      --d;
    }
    return false;
  };

  bool covered = true;
  if (!view.certs.empty()) {
    const certificate& latest = view.certs.back();
    if (latest.index > 0 && tree.contains(latest.checkpointed_block)) {
      uint64_t base_depth = tree.depth(latest.checkpointed_block);
      uint64_t new_depth = tree.depth(parent) + 1;
      bool has = branch_has(
          [&](const block& pb) {
            return pb.embedded_cert && pb.embedded_cert->index == latest.index;
          },
          base_depth);
      if (!has && new_depth <= base_depth + window_c) {
        embed = latest;
        embed->references.clear();
        embed->merkle_root.reset();
        embed->witness.reset();
      }
      covered = has || embed.has_value();
    }
    if (variant == protocol_variant::advocate_hooks) hook = latest.index;
  } else if (!view.pc_certs.empty()) {
    certificate latest = view.pc_certs.back().to_core_certificate();
    if (latest.index > 0 && tree.contains(latest.checkpointed_block)) {
      uint64_t base_depth = tree.depth(latest.checkpointed_block);
      uint64_t new_depth = tree.depth(parent) + 1;
      bool has = branch_has(
          [&](const block& pb) {
            return pb.embedded_cert && pb.embedded_cert->index == latest.index;
          },
          base_depth);
      if (!has && new_depth <= base_depth + window_c) {
        embed = latest;
        embed->references.clear();
      }
      covered = has || embed.has_value();
    }
  } else if (variant == protocol_variant::stochastic_cp && !view.baseline_certs.empty()) {
    const baseline_cert& latest = view.baseline_certs.back();
    if (latest.index > 0 && tree.contains(latest.checkpointed_block)) {
      uint64_t base_depth = tree.depth(latest.checkpointed_block);
      uint64_t new_depth = tree.depth(parent) + 1;
      bool has =
          branch_has([&](const block& pb) { return embeds_checkpoint(pb, latest); }, base_depth);
      if (!has && new_depth <= base_depth + window_c) embed_cp = latest;
      covered = has || embed_cp.has_value();
    }
  }
  return covered;
}

block simulation::make_private_block(uint64_t round) {
  // Private fork extension; adversarial blocks carry no honest transactions.
  block_id parent = private_tip_valid_ && !adv_.private_blocks.empty()
                        ? adv_.private_blocks.back().id
                        : adv_.mine_tip;
  const block_tree& tree = adv_.view.trees[0];
  std::optional<certificate> embed;
  std::optional<baseline_cert> embed_cp;
  std::optional<uint64_t> hook;
  adversarial_embeds(tree, adv_.view, cfg_.variant, cfg_.window_c, parent, embed, embed_cp, hook);
  return block::make(parent, miner_class::adversarial, {}, round, embed, embed_cp, hook, 0);
}

block_id simulation::censor_anchor(uint32_t chain) const {
  if (pc_mode()) {
    const pc_certificate& latest = adv_.view.pc_certs.back();
    return chain == 0 ? latest.base_block : latest.tips.at(chain - 1);
  }
  if (baseline_family()) return adv_.view.baseline_certs.back().checkpointed_block;
  return adv_.view.certs.back().checkpointed_block;
}

block simulation::make_censor_block(uint64_t round, uint32_t chain) {
  // Censorship: public mining that refuses to extend honest blocks. The
  // adversary grows its own branch per chain, re-rooted at the checkpoint
  // anchor whenever a certificate strands the old branch. It keeps the
  // protocol itself alive: when its branch can no longer publish the pending
  // certificate inside the window it re-roots rather than mine dead blocks.
  const block_tree& tree = adv_.view.trees[chain];
  block_id anchor = censor_anchor(chain);
  block_id parent = anchor;
  if (adv_.censor_tips[chain] && tree.contains(*adv_.censor_tips[chain]) &&
      tree.is_ancestor(anchor, *adv_.censor_tips[chain])) {
    parent = *adv_.censor_tips[chain];
  }

  std::optional<certificate> embed;
  std::optional<baseline_cert> embed_cp;
  std::optional<uint64_t> hook;
  std::optional<block_id> base_ref;
  if (chain == 0) {
    bool covered = adversarial_embeds(tree, adv_.view, cfg_.variant, cfg_.window_c, parent, embed,
                                      embed_cp, hook);
    if (!covered && parent != anchor) {
      // the branch missed the publication window; restart from the anchor
      parent = anchor;
      embed.reset();
      embed_cp.reset();
      hook.reset();
      adversarial_embeds(tree, adv_.view, cfg_.variant, cfg_.window_c, parent, embed, embed_cp,
                         hook);
    }
  } else {
    pc_state st = pc_view_of(adv_.view);
    if (auto referring = pc_referring_base_block(adv_.view.trees[0], st.last, cfg_.window_c)) {
      base_ref = *referring;
    }
  }
  block b = block::make(parent, miner_class::adversarial, {}, round, embed, embed_cp, hook, chain,
                        base_ref);
  adv_.censor_tips[chain] = b.id;
  return b;
}

void simulation::release_private(uint64_t round) {
  if (adv_.private_blocks.empty()) return;
  log_.push(round,
            ev_burst_released{adv_.private_blocks.size(), adv_.view.trees[0].depth(adv_.fork_base)});
  adv_.mine_tip = adv_.private_blocks.back().id; // keep extending the released chain
  for (auto& b : adv_.private_blocks) schedule(round + cfg_.delta, block_msg{b});
  adv_.private_blocks.clear();
  private_tip_valid_ = false;
}

// Selfish partial release: publish just enough of the private chain to take
// over, keep the surplus hidden as next epoch's head start.
void simulation::release_prefix(uint64_t round, uint64_t max_depth) {
  const block_tree& tree = adv_.view.trees[0];
  size_t n = 0;
  while (n < adv_.private_blocks.size() &&
         tree.depth(adv_.private_blocks[n].id) <= max_depth) {
    ++n;
  }
  if (n == 0) return;
  if (n == adv_.private_blocks.size()) {
    release_private(round);
    return;
  }
  log_.push(round, ev_burst_released{n, adv_.view.trees[0].depth(adv_.fork_base)});
  for (size_t i = 0; i < n; ++i) schedule(round + cfg_.delta, block_msg{adv_.private_blocks[i]});
  adv_.private_blocks.erase(adv_.private_blocks.begin(),
                            adv_.private_blocks.begin() + static_cast<long>(n));
}

void simulation::maybe_refork(uint64_t round) {
  const block_tree& tree = adv_.view.trees[0];
  uint64_t latest_index = 0;
  block_id cp;
  if (certificate_family()) {
    latest_index = adv_.view.certs.back().index;
    cp = adv_.view.certs.back().checkpointed_block;
  } else if (baseline_family()) {
    latest_index = adv_.view.baseline_certs.back().index;
    cp = adv_.view.baseline_certs.back().checkpointed_block;
  } else {
    return;
  }
  if (latest_index <= adv_.last_seen_cert || !tree.contains(cp)) return;
  adv_.last_seen_cert = latest_index;

  // Stochastic renewal invalidates pre-checkpoint stock outright. Otherwise
  // the fork survives whenever the new checkpoint landed on it (the surplus
  // above the checkpoint keeps compounding, the nakamoto failure mode).
  bool renewal = cfg_.variant == protocol_variant::stochastic_cp;
  block_id fork_tip = private_tip_valid_ && !adv_.private_blocks.empty()
                          ? adv_.private_blocks.back().id
                          : adv_.mine_tip;
  bool keep = !renewal && tree.is_ancestor(cp, fork_tip);
  if (!keep) {
    // Dead stock is worthless and stays withheld; it never reaches an honest
    // view.
    adv_.private_blocks.clear();
    private_tip_valid_ = false;
    adv_.mine_tip = cp;
  }
  adv_.fork_base = cp;
  (void)round;
}

uint64_t simulation::observer_public_depth() const {
  auto chain = party_main_chain(observer_, 0);
  return chain.size() - 1;
}

void simulation::adversary_step(uint64_t round) {
  if (cfg_.adversary == adversary_strategy::none || cfg_.beta <= 0.0) return;

  double rate = cfg_.honest_rate * cfg_.beta / (1.0 - cfg_.beta);
  uint64_t k = static_cast<uint64_t>(rate);
  if (lottery_adv_.bernoulli(rate - static_cast<double>(k))) ++k;

  if (cfg_.adversary == adversary_strategy::censorship) {
    for (uint64_t i = 0; i < k; ++i) {
      uint32_t chain = 0;
      if (pc_mode() && cfg_.chains > 1) {
        chain = static_cast<uint32_t>(sortition_.next_below(cfg_.chains));
      }
      block b = make_censor_block(round, chain);
      ++adv_mined_;
      log_.push(round,
                ev_block_mined{b.id, b.parent, miner_class::adversarial, b.chain_id,
                               adv_.view.trees[b.chain_id].depth(b.parent) + 1, 0,
                               b.embedded_cert.has_value() || b.embedded_checkpoint.has_value(),
                               0, true});
      adv_.view.trees[b.chain_id].insert_block(b);
      note_seen(b.id, round);
      schedule(round + cfg_.delta, block_msg{b});
    }
    return;
  }

  // private-mining-bursts
  maybe_refork(round);

  for (uint64_t i = 0; i < k; ++i) { // k may be zero on miss rounds
    block b = make_private_block(round);
    ++adv_mined_;
    log_.push(round, ev_block_mined{b.id, b.parent, miner_class::adversarial, 0,
                                    adv_.view.trees[0].depth(b.parent) + 1, 0,
                                    b.embedded_cert.has_value() ||
                                        b.embedded_checkpoint.has_value(),
                                    0, false});
    adv_.view.trees[0].insert_block(b);
    adv_.private_blocks.push_back(b);
    private_tip_valid_ = true;
  }

  if (!adv_.private_blocks.empty()) {
    uint64_t tip_depth = adv_.view.trees[0].depth(adv_.private_blocks.back().id);
    uint64_t fork_depth = adv_.view.trees[0].depth(adv_.fork_base);
    if (cfg_.variant == protocol_variant::nakamoto_cp) {
      // No renewal, so pre-mining pays: contest the trigger whenever ahead,
      // publishing only the prefix that wins the race and keeping the surplus
      // as a head start on the next epoch.
      uint64_t trigger =
          adv_.view.trees[0].depth(adv_.view.baseline_certs.back().checkpointed_block) +
          cfg_.epoch_e;
      uint64_t public_tip = observer_public_depth();
      if (tip_depth >= trigger && tip_depth > public_tip) {
        release_prefix(round, std::max<uint64_t>(trigger, public_tip + cfg_.delta + 1));
      }
    } else if (tip_depth >= fork_depth + cfg_.epoch_e) {
      release_private(round); // the burst spans an epoch
    }
  }
}

void simulation::post_new_blocks_to_smr(uint64_t round) {
  for (const auto& id : observer_new_blocks_) {
    if (!observer_.trees[0].contains(id)) continue;
    const block& b = observer_.trees[0].get(id);
    try {
      smr_post_block_reference(bft_, observer_.trees[0], b, round);
      const smr_tx& e = bft_.chain.entries.back();
      if (e.kind == smr_tx::tx_kind::block_reference && e.block == id &&
          e.posted_round == round) {
        log_.push(round, ev_smr_posted{bft_.chain.entries.size() - 1, e.block, e.depth, false,
                                       e.finalized_round});
      }
    } catch (const protocol_error&) {
      // conflict-rule rejection; honest traffic in this model never hits it
    }
  }
  observer_new_blocks_.clear();
}

void simulation::broadcast_cert(const message& msg, uint64_t round) {
  try_adopt_one(observer_, cfg_.parties, msg, round);
  ingest(adv_.view, cfg_.parties + 1, msg, round, true);
  schedule(round + cfg_.delta, msg);
}

void simulation::service_step(uint64_t round) {
  // A burst delivery can advance the chain across several epoch boundaries at
  // once; the service issues every certificate it is due, in index order.
  const int max_per_round = 64;
  switch (cfg_.variant) {
    case protocol_variant::advocate:
    case protocol_variant::advocate_hooks: {
      for (int i = 0; i < max_per_round; ++i) {
        auto cert = service_scan(svc_, observer_.trees[0], round);
        if (!cert) break;
        log_.push(round, ev_cert_emitted{cert->index, cert->checkpointed_block,
                                         cert->references.size(), false});
        note_seen(cert->checkpointed_block, round, true);
        broadcast_cert(cert_msg{*cert}, round);
      }
      break;
    }
    case protocol_variant::advocate_bft: {
      post_new_blocks_to_smr(round);
      for (int i = 0; i < max_per_round; ++i) {
        auto cert = smr_emit_checkpoint(bft_, observer_.trees[0], round);
        if (!cert) break;
        const smr_tx& tc = bft_.chain.entries[cert->witness->smr_position];
        log_.push(tc.posted_round, ev_smr_posted{cert->witness->smr_position, tc.block, 0, true,
                                                 tc.finalized_round});
        log_.push(round, ev_cert_emitted{cert->index, cert->checkpointed_block,
                                         cert->references.size(), false});
        note_seen(cert->checkpointed_block, round, true);
        broadcast_cert(cert_msg{*cert}, round);
      }
      break;
    }
    case protocol_variant::advocate_pc: {
      for (int i = 0; i < max_per_round; ++i) {
        auto cert = pc_scan(observer_.trees, pc_, round);
        if (!cert) break;
        log_.push(round,
                  ev_cert_emitted{cert->index, cert->base_block, cert->references.size(), false});
        note_seen(cert->base_block, round, true);
        broadcast_cert(pc_cert_msg{*cert}, round);
      }
      break;
    }
    case protocol_variant::nakamoto_cp:
    case protocol_variant::stochastic_cp: {
      for (int i = 0; i < max_per_round; ++i) {
        auto cert = baseline_scan(observer_.trees[0], base_svc_, round);
        if (!cert) break;
        log_.push(round, ev_cert_emitted{cert->index, cert->checkpointed_block, 0, false});
        note_seen(cert->checkpointed_block, round, true);
        broadcast_cert(baseline_msg{*cert}, round);
      }
      break;
    }
  }
}

// The stable order only ever extends, so each adoption appends its slice:
// the chain from the previous checkpointed block through the previous
// certificate's referring block, that certificate's references, then the
// chain up to the new checkpointed block. A full rebuild would walk the
// whole history per certificate and turn the run quadratic.
void simulation::recompute_stable(party_view& view, uint32_t party_idx, uint64_t round) {
  if (!view.stable_dirty) return;
  view.stable_dirty = false;

  const block_tree& tree = view.trees[0];

  auto append = [&](const block_id& id) {
    if (!view.stable_seen.insert(id).second) return;
    view.stable_order.push_back(id);
    view.stable_hash.push_back(hash_step(view.stable_hash.back(), id));
    for (const auto& tx : lookup_block(view, id).txs) view.included_txids.insert(tx.id);
  };

  if (view.stable_order.empty()) {
    view.stable_hash.push_back(0x6a09e667f3bcc908ULL);
    append(tree.genesis());
    view.stable_cert_count = 1; // the bootstrap certificate
  }

  auto core_cert = [&](size_t k) -> certificate {
    if (pc_mode()) return view.pc_certs[k].to_core_certificate();
    return view.certs[k];
  };
  size_t adopted = certificate_family() ? view.certs.size()
                   : pc_mode()          ? view.pc_certs.size()
                                        : view.baseline_certs.size();

  // Chain segment (from_cp, to] in order, verifying the extension really
  // descends from the previous checkpoint.
  auto chain_segment = [&](const block_id& from_cp, const block_id& to) {
    std::vector<block_id> seg;
    uint64_t stop = tree.depth(from_cp);
    block_id cur = to;
    uint64_t d = tree.depth(to);
    while (d > stop) {
      seg.push_back(cur);
      cur = tree.get(cur).parent;
      --d;
    }
    if (cur != from_cp) safety_ok_ = false; // checkpoint monotonicity broken
    std::reverse(seg.begin(), seg.end());
    return seg;
  };

  while (view.stable_cert_count < adopted) {
    size_t k = view.stable_cert_count;
    if (baseline_family()) {
      const baseline_cert& prev = view.baseline_certs[k - 1];
      const baseline_cert& next = view.baseline_certs[k];
      for (const auto& id : chain_segment(prev.checkpointed_block, next.checkpointed_block)) {
        append(id);
      }
    } else {
      certificate prev = core_cert(k - 1);
      certificate next = core_cert(k);
      auto seg = chain_segment(prev.checkpointed_block, next.checkpointed_block);
      // the previous certificate's references stabilize now, placed after its
      // referring block (or directly after its checkpointed block when no
      // block published it)
      size_t cut = 0;
      if (prev.index > 0) {
        uint64_t base_depth = tree.depth(prev.checkpointed_block);
        for (size_t i = 0; i < seg.size() && i < cfg_.window_c; ++i) {
          const block& b = tree.get(seg[i]);
          if (b.embedded_cert && b.embedded_cert->index == prev.index &&
              b.embedded_cert->signature.valid &&
              tree.depth(seg[i]) <= base_depth + cfg_.window_c) {
            cut = i + 1;
            break;
          }
        }
      }
      for (size_t i = 0; i < cut; ++i) append(seg[i]);
      for (const auto& ref : prev.references) append(ref);
      for (size_t i = cut; i < seg.size(); ++i) append(seg[i]);
    }
    ++view.stable_cert_count;
  }

  // At close the final certificate's references join the stable order, so the
  // ledger ends complete on a checkpoint.
  if (closing_ && adopted > 0 && !baseline_family()) {
    for (const auto& ref : core_cert(adopted - 1).references) append(ref);
  }

  if (party_idx < cfg_.parties) {
    log_.push(round, ev_stable_advanced{party_idx, view.stable_order.size()});
  }

  // Party 0 is the measuring party: extend its sanitized stable ledger and
  // record confirmations.
  if (party_idx == 0) {
    size_t old_txs = view.stable_ledger.tx_order.size();
    auto lookup = [&](const block_id& id) -> const block& { return lookup_block(view, id); };
    sanitize_extend(view.stable_ledger, view.stable_order, lookup);
    for (size_t i = old_txs; i < view.stable_ledger.tx_order.size(); ++i) {
      const tx_id& id = view.stable_ledger.tx_order[i];
      auto it = tx_generated_round_.find(id);
      uint64_t gen = it == tx_generated_round_.end() ? 0 : it->second;
      log_.push(round, ev_tx_confirmed{id, gen, i});
    }
  }
}

void simulation::assertions(uint64_t round) {
  for (uint32_t i = 0; i < cfg_.parties; ++i) recompute_stable(parties_[i], i, round);
  recompute_stable(observer_, cfg_.parties, round);

  // Prefix consistency across honest views: everyone's stable order is a
  // prefix of the longest one.
  const party_view* longest = &observer_;
  for (const auto& p : parties_) {
    if (p.stable_order.size() > longest->stable_order.size()) longest = &p;
  }
  auto check = [&](const party_view& v) {
    size_t len = v.stable_order.size();
    if (len > longest->stable_order.size() ||
        v.stable_hash.back() != longest->stable_hash[len]) {
      safety_ok_ = false;
    }
  };
  for (const auto& p : parties_) check(p);
  check(observer_);
}

void simulation::close_out() {
  // A rushing adversary that knows the horizon plays its last burst when it
  // wins the length race outright; otherwise the stock stays withheld and
  // never enters any ledger.
  if (cfg_.adversary == adversary_strategy::private_mining_bursts &&
      !adv_.private_blocks.empty()) {
    uint64_t tip_depth = adv_.view.trees[0].depth(adv_.private_blocks.back().id);
    if (tip_depth > observer_public_depth() + cfg_.delta) release_private(cfg_.rounds);
  }

  // Flush in-flight traffic. No mining and no new certificate triggers: the
  // closing checkpoint sweeps whatever the backlog would have covered.
  uint64_t flush_rounds = 2ull * cfg_.delta + 2ull * cfg_.delta_bft + 2;
  uint64_t r = cfg_.rounds;
  for (uint64_t i = 1; i <= flush_rounds || !schedule_.empty(); ++i) {
    r = cfg_.rounds + i;
    deliver_due(r);
    assertions(r);
  }

  // Final checkpoint: every run ends on one, so the aggregate ledger spans
  // the whole public tree.
  uint64_t close_round = r + 1;
  closing_ = true;

  message closing_msg = cert_msg{certificate{}};
  switch (cfg_.variant) {
    case protocol_variant::advocate:
    case protocol_variant::advocate_hooks: {
      auto chain = party_main_chain(observer_, 0);
      certificate cert = closing_certificate(svc_, observer_.trees[0], chain.back(), close_round);
      log_.push(close_round,
                ev_cert_emitted{cert.index, cert.checkpointed_block, cert.references.size(), true});
      closing_msg = cert_msg{cert};
      break;
    }
    case protocol_variant::advocate_bft: {
      auto chain = party_main_chain(observer_, 0);
      certificate cert =
          bft_closing_certificate(bft_, observer_.trees[0], chain.back(), close_round);
      log_.push(close_round,
                ev_cert_emitted{cert.index, cert.checkpointed_block, cert.references.size(), true});
      closing_msg = cert_msg{cert};
      break;
    }
    case protocol_variant::advocate_pc: {
      auto chain = party_main_chain(observer_, 0);
      pc_certificate cert = pc_closing_certificate(observer_.trees, pc_, chain.back(), close_round);
      log_.push(close_round,
                ev_cert_emitted{cert.index, cert.base_block, cert.references.size(), true});
      closing_msg = pc_cert_msg{cert};
      break;
    }
    case protocol_variant::nakamoto_cp:
    case protocol_variant::stochastic_cp: {
      auto chain = party_main_chain(observer_, 0);
      baseline_cert cert =
          baseline_closing_certificate(observer_.trees[0], base_svc_, chain.back(), close_round);
      log_.push(close_round, ev_cert_emitted{cert.index, cert.checkpointed_block, 0, true});
      closing_msg = baseline_msg{cert};
      break;
    }
  }

  // Close-out accounting happens off protocol time: adopt everywhere at once.
  for (uint32_t i = 0; i < cfg_.parties; ++i) {
    if (!try_adopt_one(parties_[i], i, closing_msg, close_round)) safety_ok_ = false;
    parties_[i].stable_dirty = true;
  }
  if (!try_adopt_one(observer_, cfg_.parties, closing_msg, close_round)) safety_ok_ = false;
  observer_.stable_dirty = true;
  assertions(close_round);

  uint64_t final_index = 0;
  if (certificate_family()) final_index = observer_.certs.back().index;
  else if (pc_mode()) final_index = observer_.pc_certs.back().index;
  else final_index = observer_.baseline_certs.back().index;
  log_.push(close_round, ev_run_closed{final_index});
}

sim_result simulation::run() {
  init();
  for (uint64_t round = 1; round <= cfg_.rounds; ++round) {
    deliver_due(round);
    generate_txs(round);
    honest_mining(round);
    adversary_step(round);
    service_step(round);
    assertions(round);
  }
  close_out();

  sim_result res;
  res.config = cfg_;
  res.trees = parties_[0].trees;
  res.final_ledger = parties_[0].stable_ledger;
  res.certs = parties_[0].certs;
  res.baseline_certs = parties_[0].baseline_certs;
  res.pc_certs = parties_[0].pc_certs;
  if (cfg_.variant == protocol_variant::advocate_bft) res.smr_dump = bft_.chain.dump();
  res.safety_ok = safety_ok_;

  res.synchrony_ok = true;
  for (const auto& [key, span] : seen_span_) {
    if (span.second > span.first + cfg_.delta) res.synchrony_ok = false;
  }

  res.honest_blocks_mined = honest_mined_;
  res.adversarial_blocks_mined = adv_mined_;
  res.effective_rounds = log_.events.empty() ? cfg_.rounds : log_.events.back().round;
  res.log = std::move(log_);
  return res;
}

} // namespace

sim_result run_simulation(const sim_config& config) {
  config.validate();
  simulation sim(config);
  return sim.run();
}

} // namespace advocate
