#include <benchmark/benchmark.h>

#include "gnpr/cluster.hpp"
#include "gnpr/metrics.hpp"
#include "gnpr/repr.hpp"
#include "gnpr/synth.hpp"

namespace {

void BM_Representation(benchmark::State& state) {
  const auto panel = gnpr::generate(gnpr::preset("C", 200, state.range(0)), 1).panel;
  for (auto _ : state) benchmark::DoNotOptimize(gnpr::build_representation(panel, 100, 1));
  state.SetItemsProcessed(state.iterations() * 200 * state.range(0));
}
BENCHMARK(BM_Representation)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_GnprMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto repr = gnpr::build_representation(gnpr::generate(gnpr::preset("C", n, 5000), 1).panel);
  for (auto _ : state) benchmark::DoNotOptimize(gnpr::distance_matrix(repr, gnpr::ThetaWeight(0.5), 1));
  state.counters["pairs/s"] =
      benchmark::Counter(static_cast<double>(n * (n - 1) / 2), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_GnprMatrix)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_AverageLinkage(benchmark::State& state) {
  const auto panel = gnpr::generate(gnpr::preset("C", 200, 1000), 1).panel;
  const auto d = gnpr::panel_distance_matrix(panel, gnpr::DistanceKind::gnpr, gnpr::ThetaWeight(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(gnpr::agglomerate(d, gnpr::Linkage::average));
}
BENCHMARK(BM_AverageLinkage)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
