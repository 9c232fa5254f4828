#include <advocate/experiment.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace advocate {

void experiment_matrix::validate() const {
  if (seeds.empty()) raise(errc::config_error, "every cell needs at least one seed");
  if (variants.empty() || betas.empty() || epochs.empty() || delta_bfts.empty()) {
    raise(errc::config_error, "empty matrix dimension");
  }
}

namespace {

struct trial_spec {
  sim_config cfg;
  size_t cell = 0;
};

struct trial_outcome {
  metrics_report report;
  bool failed = false;
  std::string note;
};

sim_config cell_config(const experiment_matrix& m, protocol_variant v, double beta, uint32_t e,
                       uint32_t dbft, uint64_t seed) {
  sim_config cfg = m.base;
  cfg.variant = v;
  cfg.beta = beta;
  cfg.epoch_e = e;
  cfg.seed = seed;
  cfg.delta_bft = 0;
  cfg.hook_t.reset();
  if (v == protocol_variant::advocate_bft) {
    cfg.delta_bft = dbft;
    cfg.window_c = std::max(cfg.window_c, 2u + dbft);
  }
  if (v == protocol_variant::advocate_hooks) cfg.hook_t = m.base.hook_t.value_or(2);
  if (v != protocol_variant::advocate_pc) cfg.chains = 1;
  if (beta == 0.0) cfg.adversary = adversary_strategy::none;
  return cfg;
}

trial_outcome run_trial(const sim_config& cfg) {
  trial_outcome out;
  try {
    sim_result run = run_simulation(cfg);

    sim_config ref_cfg = cfg;
    ref_cfg.beta = 0.0;
    ref_cfg.adversary = adversary_strategy::none;
    sim_result reference = run_simulation(ref_cfg);

    out.report = compute_metrics(run, &reference);
    if (!run.safety_ok) {
      out.failed = true;
      out.note = "SafetyViolation: stable-prefix conflict in " + cfg.describe();
    }
  } catch (const protocol_error& err) {
    out.failed = true;
    out.note = std::string(err.what()) + " in " + cfg.describe();
  }
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace

matrix_result run_matrix(const experiment_matrix& matrix) {
  matrix.validate();

  std::vector<trial_spec> trials;
  size_t cell = 0;
  for (auto v : matrix.variants) {
    for (double beta : matrix.betas) {
      for (uint32_t e : matrix.epochs) {
        for (uint32_t dbft : matrix.delta_bfts) {
          if (v != protocol_variant::advocate_bft && dbft != 0) continue;
          for (uint64_t seed : matrix.seeds) {
            trials.push_back(trial_spec{cell_config(matrix, v, beta, e, dbft, seed), cell});
          }
          ++cell;
        }
      }
    }
  }

  std::vector<trial_outcome> outcomes(trials.size());
  uint32_t jobs = std::max(1u, matrix.jobs);
  if (jobs == 1) {
    for (size_t i = 0; i < trials.size(); ++i) outcomes[i] = run_trial(trials[i].cfg);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= trials.size()) return;
        outcomes[i] = run_trial(trials[i].cfg);
      }
    };
    std::vector<std::thread> pool;
    for (uint32_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  matrix_result result;
  std::ostringstream trials_csv;
  trials_csv << "# schema: advocate-metrics-v1\n" << metrics_report::csv_header() << "\n";

  struct cell_acc {
    std::string label;
    double fg = 0, il = 0, hw = 0, cq = 0;
    size_t n = 0;
    bool il_inf = false;
  };
  std::map<size_t, cell_acc> cells;
  std::map<std::pair<std::string, double>, std::pair<double, size_t>> cq_by_variant_beta;

  for (size_t i = 0; i < trials.size(); ++i) {
    const auto& spec = trials[i];
    const auto& out = outcomes[i];
    if (out.failed) {
      result.ok = false;
      result.notes.push_back(out.note);
      continue;
    }
    trials_csv << out.report.csv_row(spec.cfg) << "\n";

    cell_acc& acc = cells[spec.cell];
    if (acc.n == 0) {
      std::ostringstream label;
      label << variant_name(spec.cfg.variant) << "," << format_double(spec.cfg.beta) << ","
            << spec.cfg.epoch_e << "," << spec.cfg.delta_bft;
      acc.label = label.str();
    }
    acc.fg += out.report.fg;
    acc.il += std::isinf(out.report.il) ? 0.0 : out.report.il;
    acc.il_inf = acc.il_inf || std::isinf(out.report.il) || out.report.il_infinite;
    acc.hw += out.report.hw;
    acc.cq += out.report.cq;
    ++acc.n;

    auto key = std::make_pair(std::string(variant_name(spec.cfg.variant)), spec.cfg.beta);
    cq_by_variant_beta[key].first += out.report.cq;
    cq_by_variant_beta[key].second += 1;
  }
  result.trials_csv = trials_csv.str();

  std::ostringstream summary;
  summary << "# schema: advocate-summary-v1\n"
          << "variant,beta,e,delta_bft,trials,fg_mean,il_mean,il_infinite,hw_mean,cq_mean\n";
  for (const auto& [idx, acc] : cells) {
    if (acc.n == 0) continue;
    double n = static_cast<double>(acc.n);
    summary << acc.label << "," << acc.n << "," << format_double(acc.fg / n) << ","
            << format_double(acc.il / n) << "," << (acc.il_inf ? 1 : 0) << ","
            << format_double(acc.hw / n) << "," << format_double(acc.cq / n) << "\n";
  }
  result.summary_csv = summary.str();

  std::ostringstream curve;
  curve << "# schema: advocate-cq-curve-v1\n"
        << "beta,optimal,hooks_bound_t2,hooks_bound_t3";
  std::vector<std::string> curve_variants;
  for (auto v : matrix.variants) curve_variants.push_back(variant_name(v));
  for (const auto& name : curve_variants) curve << "," << name << "_empirical";
  curve << "\n";
  for (double beta : matrix.betas) {
    curve << format_double(beta) << "," << format_double(1.0 - beta) << ","
          << format_double(bound_short_term_cq(beta, 2)) << ","
          << format_double(bound_short_term_cq(beta, 3));
    for (const auto& name : curve_variants) {
      auto it = cq_by_variant_beta.find(std::make_pair(name, beta));
      curve << ",";
      if (it != cq_by_variant_beta.end() && it->second.second > 0) {
        curve << format_double(it->second.first / static_cast<double>(it->second.second));
      }
    }
    curve << "\n";
  }
  result.cq_curve_csv = curve.str();
  return result;
}

void write_matrix_result(const matrix_result& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) raise(errc::io_error, "cannot create " + out_dir);

  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) raise(errc::io_error, "cannot write " + name);
    out << content;
  };
  write("trials.csv", result.trials_csv);
  write("summary.csv", result.summary_csv);
  write("cq_curve.csv", result.cq_curve_csv);
}

} // namespace advocate
