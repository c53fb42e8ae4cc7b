#include <benchmark/benchmark.h>

#include <random>

#include "biasgraph/component_tracker.hpp"
#include "biasgraph/graph_process.hpp"
#include "biasgraph/ode_engine.hpp"

using namespace biasgraph;

static void BM_UniteRandom(benchmark::State &state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    ComponentTracker t(n);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<vertex_t> pick(0, n - 1);
    for (std::uint32_t i = 0; i < n; ++i)
      t.unite(pick(rng), pick(rng));
    benchmark::DoNotOptimize(t.sum_sq());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UniteRandom)->Arg(1 << 16)->Arg(1 << 20);

static void BM_Connectivity(benchmark::State &state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const ModelSpec model{state.range(1) ? ModelKind::Or : ModelKind::And, 2.0,
                        state.range(2) ? Sampling::OrderedPairApprox
                                       : Sampling::Exact};
  std::uint64_t edges = 0;
  for (auto _ : state) {
    ProcessState s(n, model, 3);
    edges += s.run_until(stop::Connected{}).m;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(edges));
}
BENCHMARK(BM_Connectivity)
    ->ArgsProduct({{100000}, {0, 1}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

// Scaling check: uniform process to connectivity at n and 2n.
static void BM_ConnectivityScaling(benchmark::State &state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    ProcessState s(n, {ModelKind::And, 1.0}, seed++);
    benchmark::DoNotOptimize(s.run_until(stop::Connected{}).m);
  }
}
BENCHMARK(BM_ConnectivityScaling)->Arg(100000)->Arg(200000)->Arg(400000)
    ->Unit(benchmark::kMillisecond);

static void BM_Singularity(benchmark::State &state) {
  const double K = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ode::find_singularity(K).x_c);
}
BENCHMARK(BM_Singularity)->Arg(0)->Arg(1)->Arg(100)->Arg(10000)
    ->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
