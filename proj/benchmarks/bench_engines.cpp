#include <benchmark/benchmark.h>

#include <vector>

#include "monodim/distribution.hpp"
#include "monodim/exact.hpp"
#include "monodim/quadrature.hpp"
#include "monodim/random.hpp"
#include "monodim/variational.hpp"

using namespace monodim;

namespace {

std::vector<double> activities(int n, std::uint64_t seed = 42) {
  RandomStream stream(seed);
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (auto& x : xs) x = 0.1 + 2.9 * stream.next_unit();
  return xs;
}

void BM_SymmetricLogPartition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const exact::CompleteModelInstance instance{activities(n), 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact::symmetric_log_partition(instance));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SymmetricLogPartition)->Range(64, 4096)->Complexity();

void BM_DeletionRecursion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto graph = exact::WeightedGraph::complete(activities(n), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact::hl_log_partition(graph));
  }
}
BENCHMARK(BM_DeletionRecursion)->DenseRange(12, 20, 4);

void BM_PairingOracle(benchmark::State& state) {
  const auto graph = exact::WeightedGraph::complete(activities(10), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact::wick_partition(graph));
  }
}
BENCHMARK(BM_PairingOracle);

void BM_HermiteLogPartition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const exact::CompleteModelInstance instance{activities(n), 1.0};
  const int nodes = exact::hermite_exact_nodes(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact::hermite_log_partition(instance, nodes));
  }
}
BENCHMARK(BM_HermiteLogPartition)->Arg(64)->Arg(256);

void BM_SolveFixedPoint(benchmark::State& state) {
  const auto dist = state.range(0) == 0
                        ? ActivityDistribution::dirac(1.0)
                        : ActivityDistribution::log_normal(0.2, 0.4);
  const variational::ModelParams params{1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(variational::solve_fixed_point(params, dist));
  }
}
BENCHMARK(BM_SolveFixedPoint)->Arg(0)->Arg(1);

void BM_AdaptiveExpectation(benchmark::State& state) {
  const auto dist = ActivityDistribution::log_normal(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dist.expect([](double x) { return 1.0 / (0.7 + x); }));
  }
}
BENCHMARK(BM_AdaptiveExpectation);

void BM_GaussHermiteRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauss_hermite_rule(n));
  }
}
BENCHMARK(BM_GaussHermiteRule)->Arg(33)->Arg(129);

}  // namespace

BENCHMARK_MAIN();
