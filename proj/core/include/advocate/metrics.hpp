#pragma once

#include <advocate/sim.hpp>

#include <optional>

namespace advocate {

// Performance metrics over a finished run plus the closed-form bounds used to
// cross-check simulation against theory.
struct metrics_report {
  double fg = 0.0;          // fractional goodput, in [0,1]
  double il = 0.0;          // inclusion latency in mean-block-arrival units
                            // (mean over confirmed; inf when nothing confirmed)
  bool il_infinite = false; // some tx stayed unconfirmed two epochs past generation
  double hw = 0.0;          // honest block wastage
  double cq = 0.0;          // honest fraction of the final ledger
  bool safety_ok = true;
  bool liveness_bound_ok = true;

  uint64_t generated_honest_txs = 0;
  uint64_t confirmed_honest_txs = 0;
  double mean_inclusion_gap = 0.0; // stable position minus ledger length at creation

  std::string csv_row(const sim_config& cfg) const;
  static std::string csv_header();
};

// u = ceil(2/h) * e. errors: DomainError.
uint64_t bound_liveness(double h, uint32_t e);

// k = e - c. errors: DomainError (requires e > c).
uint64_t bound_safety_depth(uint32_t e, uint32_t c);

// (1-beta)(t-1) / (t + beta + t*beta - 1). errors: DomainError (t >= 2).
double bound_short_term_cq(double beta, uint32_t t);

// (beta*t - beta + 1) * e / (1-beta). errors: DomainError.
double bound_inclusion_gap(double beta, uint32_t t, uint32_t e);

// Confirmation-rounds ceiling asserted against every honest transaction:
// bound_liveness plus diffusion slack.
uint64_t liveness_ceiling(const sim_config& cfg);

// G/T against a beta=0 reference run with otherwise identical config and
// seed. errors: MismatchedConfigs.
double fractional_goodput(const sim_result& run, const sim_result& reference);

// Mean of (confirmation round - generation round) / delta_A over confirmed
// honest txs; delta_A = rounds / ledger blocks. Sets *infinite when some tx
// is unconfirmed with at least two checkpoints issued after its generation.
double inclusion_latency(const sim_result& run, bool* infinite);

// 1 - |honest blocks in ledger| / |honest blocks mined|.
double honest_wastage(const sim_result& run, const aggregate_ledger& ledger);

// Honest-block fraction of the ledger, whole ledger by default or a closed
// block_order position range. Genesis counts for neither side.
// errors: EmptyWindow.
double chain_quality(const aggregate_ledger& ledger, const sim_result& run,
                     std::optional<std::pair<size_t, size_t>> window = std::nullopt);

// Every honest transaction confirmed within the ceiling (unconfirmed ones
// must not have had a full ceiling's worth of rounds left).
bool liveness_bound_holds(const sim_result& run);

// Hooks runs: every window spanning hook_t checkpoints satisfies the
// short-term chain-quality bound.
bool hooks_windows_ok(const sim_result& run);

// Mean over honest ledger blocks of (final position - live ledger length at
// creation); the chain-inclusion-gap run mean.
double mean_inclusion_gap(const sim_result& run);

metrics_report compute_metrics(const sim_result& run, const sim_result* reference);

} // namespace advocate
