#include <benchmark/benchmark.h>

#include <advocate/metrics.hpp>
#include <advocate/rng.hpp>
#include <advocate/sim.hpp>

using namespace advocate;

namespace {

block tagged(const block_id& parent, uint64_t round, uint64_t salt) {
  transaction tag = transaction::make({}, 1, round, miner_class::honest, salt);
  return block::make(parent, miner_class::honest, {tag}, round);
}

block_tree random_tree(size_t blocks, uint64_t seed) {
  prng rng(seed, "bench-tree");
  block_tree tree;
  tree.insert_block(make_genesis());
  std::vector<block_id> ids{tree.genesis()};
  for (size_t i = 1; i < blocks; ++i) {
    // mostly chain, occasional fork
    block_id parent = rng.bernoulli(0.8) ? ids.back() : ids[rng.next_below(ids.size())];
    block b = tagged(parent, i, rng.next());
    tree.insert_block(b);
    ids.push_back(b.id);
  }
  return tree;
}

} // namespace

static void BM_insert_block(benchmark::State& state) {
  for (auto _ : state) {
    block_tree tree = random_tree(static_cast<size_t>(state.range(0)), 7);
    benchmark::DoNotOptimize(tree.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_insert_block)->Arg(256)->Arg(2048);

static void BM_canonical_order(benchmark::State& state) {
  block_tree tree = random_tree(static_cast<size_t>(state.range(0)), 11);
  std::set<block_id> all;
  for (const auto& id : tree.all_ids()) all.insert(id);
  for (auto _ : state) {
    auto order = canonical_block_order(all, tree);
    benchmark::DoNotOptimize(order.size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_canonical_order)->Arg(256)->Arg(2048);

static void BM_select_main_chain(benchmark::State& state) {
  block_tree tree = random_tree(2048, 13);
  checkpoint_view view{bootstrap_certificate(), std::nullopt, 2, 5};
  refresh_view(view, tree);
  for (auto _ : state) {
    auto chain = select_main_chain(tree, view);
    benchmark::DoNotOptimize(chain.size());
  }
}
BENCHMARK(BM_select_main_chain);

static void BM_sanitize(benchmark::State& state) {
  block_tree tree = random_tree(2048, 17);
  checkpoint_view view{bootstrap_certificate(), std::nullopt, 2, 5};
  refresh_view(view, tree);
  auto chain = select_main_chain(tree, view);
  for (auto _ : state) {
    aggregate_ledger ledger = sanitize(chain, tree);
    benchmark::DoNotOptimize(ledger.tx_order.size());
  }
  state.SetItemsProcessed(state.iterations() * chain.size());
}
BENCHMARK(BM_sanitize);

static void BM_run_simulation(benchmark::State& state) {
  sim_config cfg;
  cfg.beta = static_cast<double>(state.range(0)) / 100.0;
  cfg.honest_rate = 0.99;
  cfg.epoch_e = 5;
  cfg.window_c = 2;
  cfg.rounds = 400;
  cfg.seed = 1;
  cfg.tx_rate = 2;
  cfg.parties = 4;
  cfg.adversary =
      cfg.beta > 0 ? adversary_strategy::private_mining_bursts : adversary_strategy::none;
  for (auto _ : state) {
    sim_result r = run_simulation(cfg);
    benchmark::DoNotOptimize(r.log.events.size());
  }
  state.SetItemsProcessed(state.iterations() * cfg.rounds);
}
BENCHMARK(BM_run_simulation)->Arg(0)->Arg(50)->Arg(90);

BENCHMARK_MAIN();
