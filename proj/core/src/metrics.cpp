#include <advocate/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace advocate {

uint64_t bound_liveness(double h, uint32_t e) {
  if (h <= 0.0 || h > 1.0 || e < 1) raise(errc::domain_error, "need 0 < h <= 1 and e >= 1");
  return static_cast<uint64_t>(std::ceil(2.0 / h)) * e;
}

uint64_t bound_safety_depth(uint32_t e, uint32_t c) {
  if (e <= c) raise(errc::domain_error, "need e > c");
  return e - c;
}

double bound_short_term_cq(double beta, uint32_t t) {
  if (beta < 0.0 || beta >= 1.0 || t < 2) raise(errc::domain_error, "need beta in [0,1), t >= 2");
  double td = static_cast<double>(t);
  return (1.0 - beta) * (td - 1.0) / (td + beta + td * beta - 1.0);
}

double bound_inclusion_gap(double beta, uint32_t t, uint32_t e) {
  if (beta < 0.0 || beta >= 1.0 || t < 1 || e < 1) {
    raise(errc::domain_error, "need beta in [0,1), t >= 1, e >= 1");
  }
  double td = static_cast<double>(t);
  return (beta * td - beta + 1.0) * static_cast<double>(e) / (1.0 - beta);
}

uint64_t liveness_ceiling(const sim_config& cfg) {
  // h is the probability that at least one honest block lands on the
  // checkpointed chain per round; sortition splits honest power across the
  // parallel chains.
  double h = cfg.honest_rate;
  if (cfg.variant == protocol_variant::advocate_pc && cfg.chains > 1) {
    h /= static_cast<double>(cfg.chains);
  }
  return bound_liveness(h, cfg.epoch_e) + 2ull * (cfg.delta + cfg.delta_bft);
}

namespace {

struct tx_stats {
  std::map<tx_id, uint64_t> generated;
  std::map<tx_id, uint64_t> confirmed_round;
  std::vector<uint64_t> cert_rounds; // emission rounds, regular certificates
};

tx_stats scan_txs(const sim_result& run) {
  tx_stats s;
  for (const auto& e : run.log.events) {
    if (const auto* g = std::get_if<ev_tx_generated>(&e.data)) {
      s.generated.emplace(g->id, e.round);
    } else if (const auto* c = std::get_if<ev_tx_confirmed>(&e.data)) {
      s.confirmed_round.emplace(c->id, e.round);
    } else if (const auto* ce = std::get_if<ev_cert_emitted>(&e.data)) {
      if (!ce->closing && ce->index > 0) s.cert_rounds.push_back(e.round);
    }
  }
  return s;
}

const block* find_block(const sim_result& run, const block_id& id) {
  for (const auto& tree : run.trees) {
    if (tree.contains(id)) return &tree.get(id);
  }
  return nullptr;
}

} // namespace

double fractional_goodput(const sim_result& run, const sim_result& reference) {
  const sim_config& a = run.config;
  const sim_config& b = reference.config;
  if (b.beta != 0.0 || a.honest_rate != b.honest_rate || a.epoch_e != b.epoch_e ||
      a.rounds != b.rounds || a.seed != b.seed || a.tx_rate != b.tx_rate ||
      a.parties != b.parties) {
    raise(errc::mismatched_configs, "reference must be a beta=0 twin");
  }
  tx_stats mine = scan_txs(run);
  tx_stats ref = scan_txs(reference);
  double g = static_cast<double>(mine.confirmed_round.size()) / a.rounds;
  double t = static_cast<double>(ref.confirmed_round.size()) / b.rounds;
  if (t == 0.0) return 0.0;
  return std::clamp(g / t, 0.0, 1.0);
}

double inclusion_latency(const sim_result& run, bool* infinite) {
  tx_stats s = scan_txs(run);
  double delta_a = static_cast<double>(run.config.rounds) /
                   std::max<size_t>(1, run.final_ledger.block_order.size() - 1);

  // Latency until the transaction's ledger position is final on the
  // measuring party's view, in units of mean block arrival time.
  double total = 0.0;
  size_t n = 0;
  bool inf = false;
  for (const auto& [id, gen] : s.generated) {
    auto it = s.confirmed_round.find(id);
    if (it != s.confirmed_round.end()) {
      total += static_cast<double>(it->second - gen) / delta_a;
      ++n;
    } else {
      // never in the ledger, with two checkpoints issued after generation: a
      // liveness failure, reported as the infinity marker
      size_t later = 0;
      for (uint64_t r : s.cert_rounds) {
        if (r > gen) ++later;
      }
      if (later >= 2) inf = true;
    }
  }
  if (infinite) *infinite = inf;
  if (n == 0) return std::numeric_limits<double>::infinity();
  return total / static_cast<double>(n);
}

double honest_wastage(const sim_result& run, const aggregate_ledger& ledger) {
  uint64_t honest_mined = 0, honest_in_ledger = 0;
  for (const auto& e : run.log.events) {
    if (const auto* m = std::get_if<ev_block_mined>(&e.data)) {
      if (m->miner == miner_class::honest) {
        ++honest_mined;
        if (ledger.block_position.count(m->id)) ++honest_in_ledger;
      }
    }
  }
  if (honest_mined == 0) return 0.0;
  return 1.0 - static_cast<double>(honest_in_ledger) / static_cast<double>(honest_mined);
}

double chain_quality(const aggregate_ledger& ledger, const sim_result& run,
                     std::optional<std::pair<size_t, size_t>> window) {
  size_t lo = 0, hi = ledger.block_order.empty() ? 0 : ledger.block_order.size() - 1;
  if (window) {
    lo = window->first;
    hi = window->second;
  }
  if (ledger.block_order.empty() || lo > hi || hi >= ledger.block_order.size()) {
    raise(errc::empty_window, "no blocks in window");
  }
  uint64_t honest = 0, total = 0;
  for (size_t i = lo; i <= hi; ++i) {
    const block* b = find_block(run, ledger.block_order[i]);
    if (!b || b->is_genesis()) continue;
    ++total;
    if (b->miner == miner_class::honest) ++honest;
  }
  if (total == 0) raise(errc::empty_window, "window holds only genesis");
  return static_cast<double>(honest) / static_cast<double>(total);
}

bool liveness_bound_holds(const sim_result& run) {
  tx_stats s = scan_txs(run);
  uint64_t ceiling = liveness_ceiling(run.config);
  for (const auto& [id, gen] : s.generated) {
    auto it = s.confirmed_round.find(id);
    if (it != s.confirmed_round.end()) {
      if (it->second - gen > ceiling) return false;
    } else if (run.effective_rounds > gen + ceiling) {
      return false; // had a full ceiling's worth of rounds and never confirmed
    }
  }
  return true;
}

bool hooks_windows_ok(const sim_result& run) {
  if (!run.config.hook_t) return true;
  uint32_t t = *run.config.hook_t;
  if (t < 2) return true; // the short-term bound needs t >= 2 windows
  double bound = bound_short_term_cq(run.config.beta, t);

  // Checkpointed blocks in certificate order, positions in the final ledger.
  // The closing bookkeeping checkpoint falls mid-epoch and is not a protocol
  // checkpoint, so windows do not extend to it.
  std::vector<size_t> cp_pos;
  for (const auto& cert : run.certs) {
    auto it = run.final_ledger.block_position.find(cert.checkpointed_block);
    if (it != run.final_ledger.block_position.end()) cp_pos.push_back(it->second);
  }
  if (!cp_pos.empty()) cp_pos.pop_back();
  for (size_t i = 0; i + t < cp_pos.size(); ++i) {
    double cq = chain_quality(run.final_ledger, run, std::make_pair(cp_pos[i], cp_pos[i + t]));
    if (cq + 1e-9 < bound) return false;
  }
  return true;
}

double mean_inclusion_gap(const sim_result& run) {
  double total = 0.0;
  size_t n = 0;
  for (const auto& e : run.log.events) {
    const auto* m = std::get_if<ev_block_mined>(&e.data);
    if (!m || m->miner != miner_class::honest) continue;
    auto it = run.final_ledger.block_position.find(m->id);
    if (it == run.final_ledger.block_position.end()) continue;
    total += static_cast<double>(it->second) - static_cast<double>(m->ledger_len_at_creation);
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

metrics_report compute_metrics(const sim_result& run, const sim_result* reference) {
  metrics_report r;
  r.fg = reference ? fractional_goodput(run, *reference) : 0.0;
  r.il = inclusion_latency(run, &r.il_infinite);
  r.hw = honest_wastage(run, run.final_ledger);
  r.cq = chain_quality(run.final_ledger, run);
  r.safety_ok = run.safety_ok;
  r.liveness_bound_ok = liveness_bound_holds(run);
  r.mean_inclusion_gap = mean_inclusion_gap(run);

  tx_stats s = scan_txs(run);
  r.generated_honest_txs = s.generated.size();
  r.confirmed_honest_txs = s.confirmed_round.size();
  return r;
}

std::string metrics_report::csv_header() {
  return "variant,beta,h,e,c,hook_t,delta,delta_bft,chains,rounds,seed,adversary,"
         "fg,il,il_infinite,hw,cq,safety_ok,liveness_ok,txs_generated,txs_confirmed";
}

std::string metrics_report::csv_row(const sim_config& cfg) const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << variant_name(cfg.variant) << "," << cfg.beta << "," << cfg.honest_rate << ","
     << cfg.epoch_e << "," << cfg.window_c << ",";
  if (cfg.hook_t) os << *cfg.hook_t;
  os << "," << cfg.delta << "," << cfg.delta_bft << "," << cfg.chains << "," << cfg.rounds << ","
     << cfg.seed << "," << strategy_name(cfg.adversary) << "," << fg << ",";
  if (std::isinf(il)) os << "inf";
  else os << il;
  os << "," << (il_infinite ? 1 : 0) << "," << hw << "," << cq << "," << (safety_ok ? 1 : 0)
     << "," << (liveness_bound_ok ? 1 : 0) << "," << generated_honest_txs << ","
     << confirmed_honest_txs;
  return os.str();
}

} // namespace advocate
