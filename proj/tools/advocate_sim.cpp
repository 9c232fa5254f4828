// Experiment runner for the checkpointing protocol family.
//
//   advocate_sim run     one simulation; metrics row, optional event log and
//                        ledger dumps
//   advocate_sim matrix  a trial grid; CSV reports in the output directory
//   advocate_sim bounds  closed-form bound values for given parameters
//
// Exit code 0 on success, nonzero on configuration errors or any safety
// violation in a trial.

#include <CLI11.hpp>

#include <advocate/experiment.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace advocate;

struct run_options {
  sim_config cfg;
  std::string variant = "advocate";
  std::string adversary = "none";
  std::string out_dir;
  bool dump_events = false;
  bool dump_ledger_file = false;
  bool dump_smr = false;
  int hook_t = 0;
  bool verbose = false;
};

void add_common(CLI::App* app, run_options& opt) {
  app->add_option("--beta", opt.cfg.beta, "adversarial mining fraction in [0,1)");
  app->add_option("--honest-rate", opt.cfg.honest_rate, "per-round honest block probability");
  app->add_option("--e", opt.cfg.epoch_e, "epoch length in main-chain blocks");
  app->add_option("--c", opt.cfg.window_c, "certificate publication window");
  app->add_option("--t", opt.hook_t, "hook parameter (hooks variant)");
  app->add_option("--delta", opt.cfg.delta, "network delay bound in rounds");
  app->add_option("--delta-bft", opt.cfg.delta_bft, "BFT finalization delay in rounds");
  app->add_option("--rounds", opt.cfg.rounds, "simulated rounds");
  app->add_option("--seed", opt.cfg.seed, "RNG seed");
  app->add_option("--variant", opt.variant,
                  "advocate | advocate-hooks | advocate-bft | advocate-pc | nakamoto-cp | "
                  "stochastic-cp");
  app->add_option("--adversary", opt.adversary, "none | private-mining-bursts | censorship");
  app->add_option("--tx-rate", opt.cfg.tx_rate, "honest transactions per round");
  app->add_option("--parties", opt.cfg.parties, "honest node count");
  app->add_option("--chains", opt.cfg.chains, "parallel chain count (pc variant)");
  app->add_option("--bft-n", opt.cfg.bft_n, "committee size");
  app->add_option("--bft-f", opt.cfg.bft_f, "tolerated Byzantine committee nodes");
  app->add_flag("-v,--verbose", opt.verbose, "narrate progress");
}

sim_config finish_config(run_options& opt) {
  opt.cfg.variant = parse_variant(opt.variant);
  opt.cfg.adversary = parse_strategy(opt.adversary);
  if (opt.hook_t > 0) opt.cfg.hook_t = static_cast<uint32_t>(opt.hook_t);
  opt.cfg.validate();
  return opt.cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot write " + path.string());
  out << content;
}

int cmd_run(run_options& opt) {
  sim_config cfg = finish_config(opt);
  if (opt.verbose) std::cerr << "running " << cfg.describe() << "\n";

  sim_result run = run_simulation(cfg);

  sim_config ref_cfg = cfg;
  ref_cfg.beta = 0.0;
  ref_cfg.adversary = adversary_strategy::none;
  sim_result reference = run_simulation(ref_cfg);

  metrics_report report = compute_metrics(run, &reference);
  std::cout << metrics_report::csv_header() << "\n" << report.csv_row(cfg) << "\n";

  if (!opt.out_dir.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    if (opt.dump_events) {
      write_file(std::filesystem::path(opt.out_dir) / "events.ndjson", run.log.to_ndjson());
    }
    if (opt.dump_ledger_file) {
      const block_tree& tree = run.trees[0];
      std::string text = run.config.variant == protocol_variant::advocate_pc
                             ? std::string()
                             : dump_ledger(run.final_ledger, tree);
      if (run.config.variant == protocol_variant::advocate_pc) {
        // resolve across chains
        std::ostringstream os;
        for (size_t i = 0; i < run.final_ledger.tx_order.size(); ++i) {
          const tx_id& id = run.final_ledger.tx_order[i];
          os << i << " " << id.hex() << " " << run.final_ledger.tx_block.at(id).hex() << "\n";
        }
        text = os.str();
      }
      write_file(std::filesystem::path(opt.out_dir) / "ledger.txt", text);
    }
    if (opt.dump_smr && !run.smr_dump.empty()) {
      write_file(std::filesystem::path(opt.out_dir) / "smr.txt", run.smr_dump);
    }
  }
  return run.safety_ok ? 0 : 2;
}

int cmd_matrix(run_options& opt, experiment_matrix& matrix, std::vector<std::string>& variants,
               std::string& out_dir, uint64_t seed_override, std::string& variant_filter) {
  matrix.base = finish_config(opt);
  matrix.variants.clear();
  for (const auto& name : variants) {
    if (!variant_filter.empty() && name != variant_filter) continue;
    matrix.variants.push_back(parse_variant(name));
  }
  if (matrix.variants.empty()) raise(errc::config_error, "variant filter removed every variant");
  if (seed_override != 0) matrix.seeds = {seed_override};

  matrix_result result = run_matrix(matrix);
  if (out_dir.empty()) {
    std::cout << result.trials_csv << "\n" << result.summary_csv << "\n" << result.cq_curve_csv;
  } else {
    write_matrix_result(result, out_dir);
    if (opt.verbose) std::cerr << "reports in " << out_dir << "\n";
  }
  for (const auto& note : result.notes) std::cerr << note << "\n";
  return result.ok ? 0 : 2;
}

int cmd_bounds(double h, uint32_t e, uint32_t c, double beta, uint32_t t) {
  std::cout << "liveness_u = " << bound_liveness(h, e) << " rounds\n";
  std::cout << "safety_depth_k = " << bound_safety_depth(e, c) << " blocks\n";
  if (t >= 2) std::cout << "short_term_cq = " << bound_short_term_cq(beta, t) << "\n";
  std::cout << "inclusion_gap = " << bound_inclusion_gap(beta, std::max(t, 1u), e) << " blocks\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"round-based checkpointing protocol simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value config file (subcommand options live under a [run] or [matrix] section)");

  run_options opt;

  CLI::App* run = app.add_subcommand("run", "execute one simulation");
  add_common(run, opt);
  run->add_option("--out-dir", opt.out_dir, "directory for dumps");
  run->add_flag("--events", opt.dump_events, "write events.ndjson");
  run->add_flag("--ledger", opt.dump_ledger_file, "write ledger.txt");
  run->add_flag("--smr", opt.dump_smr, "write smr.txt (bft variant)");

  experiment_matrix matrix;
  std::vector<std::string> matrix_variants{"advocate", "stochastic-cp", "nakamoto-cp"};
  std::string matrix_out, variant_filter;
  uint64_t seed_override = 0;

  CLI::App* mx = app.add_subcommand("matrix", "run a trial grid");
  add_common(mx, opt);
  mx->add_option("--variants", matrix_variants, "variants to sweep");
  mx->add_option("--betas", matrix.betas, "beta grid");
  mx->add_option("--epochs", matrix.epochs, "epoch grid");
  mx->add_option("--delta-bfts", matrix.delta_bfts, "BFT delay grid (bft variant cells)");
  mx->add_option("--seeds", matrix.seeds, "seeds per cell");
  mx->add_option("--jobs", matrix.jobs, "parallel trial workers");
  mx->add_option("--out-dir", matrix_out, "directory for CSV reports");
  mx->add_option("--seed-override", seed_override, "replace the seed list with one seed");
  mx->add_option("--variant-filter", variant_filter, "keep only this variant");

  double b_h = 0.5, b_beta = 0.0;
  uint32_t b_e = 5, b_c = 2, b_t = 0;
  CLI::App* bounds = app.add_subcommand("bounds", "print closed-form bound values");
  bounds->add_option("--honest-rate", b_h, "honest per-round block probability");
  bounds->add_option("--e", b_e, "epoch length");
  bounds->add_option("--c", b_c, "publication window");
  bounds->add_option("--beta", b_beta, "adversarial fraction");
  bounds->add_option("--t", b_t, "hook parameter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opt);
    if (mx->parsed()) {
      return cmd_matrix(opt, matrix, matrix_variants, matrix_out, seed_override, variant_filter);
    }
    if (bounds->parsed()) return cmd_bounds(b_h, b_e, b_c, b_beta, b_t);
  } catch (const advocate::protocol_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
