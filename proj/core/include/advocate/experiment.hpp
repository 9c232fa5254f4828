#pragma once

#include <advocate/metrics.hpp>

#include <string>
#include <vector>

namespace advocate {

// Cartesian trial grid over (variant, beta, epoch, delta_bft) x seeds, run
// against a shared base configuration. Every cell pairs each trial with a
// beta=0 reference run for fractional goodput.
struct experiment_matrix {
  sim_config base;
  std::vector<protocol_variant> variants{protocol_variant::advocate};
  std::vector<double> betas{0.5};
  std::vector<uint32_t> epochs{5};
  std::vector<uint32_t> delta_bfts{0};
  std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
  uint32_t jobs = 1;

  void validate() const;
};

struct matrix_result {
  // schema advocate-metrics-v1; one row per trial
  std::string trials_csv;
  // per-cell means of fg/il/hw/cq over seeds
  std::string summary_csv;
  // CQ-versus-beta table: optimal line, empirical per variant present, and
  // the analytic short-term bounds for t = 2, 3
  std::string cq_curve_csv;
  bool ok = true;                  // false when any trial tripped an assertion
  std::vector<std::string> notes; // per-cell diagnostics on failure
};

// Runs all trials (in parallel when jobs > 1; trials share no state) and
// renders the reports. Output is byte-identical regardless of job count.
matrix_result run_matrix(const experiment_matrix& matrix);

// Convenience: write the three reports into a directory.
// errors: IoError.
void write_matrix_result(const matrix_result& result, const std::string& out_dir);

} // namespace advocate
