#include <benchmark/benchmark.h>

#include <numbers>

#include "oatsq/oatsq.hpp"

namespace {

using namespace oatsq;

const InitialState kEquator = InitialState::make(std::numbers::pi / 2, 0.0);
const InitialState kTilted = InitialState::make(1.1, 0.4);

void BM_TwistFactor(benchmark::State& state) {
  double tau = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(twist_factor(1.1, tau));
    tau += 1e-6;
  }
}
BENCHMARK(BM_TwistFactor);

void BM_FullObservables(benchmark::State& state) {
  const ModelParams params{1000.0, 1.0};
  double tau = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_observables(params, kTilted, tau));
    tau += 1e-6;
  }
}
BENCHMARK(BM_FullObservables);

void BM_SqueezingMetrics(benchmark::State& state) {
  const ModelParams params{1000.0, 1.0};
  double tau = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(squeezing_metrics(params, kEquator, tau));
    tau += 1e-6;
    if (tau > 0.05) tau = 1e-3;
  }
}
BENCHMARK(BM_SqueezingMetrics);

void BM_MinimizeXi2(benchmark::State& state) {
  const ModelParams params{static_cast<double>(state.range(0)), 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_xi2(params, kEquator));
  }
}
BENCHMARK(BM_MinimizeXi2)->Arg(1000)->Arg(100000);

void BM_OracleEvolveContract(benchmark::State& state) {
  const double spin = static_cast<double>(state.range(0)) / 2.0;
  for (auto _ : state) {
    const auto dense = evolve_closed(spin, kTilted, 0.1, 0.5);
    benchmark::DoNotOptimize(contract_observables(dense));
  }
}
BENCHMARK(BM_OracleEvolveContract)->Arg(20)->Arg(40);

void BM_VarianceScan(benchmark::State& state) {
  const auto dense = evolve_closed(20.0, kTilted, 0.1, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(variance_scan(dense));
  }
}
BENCHMARK(BM_VarianceScan);

void BM_OdeEvolve(benchmark::State& state) {
  const double spin = static_cast<double>(state.range(0)) / 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_ode(spin, kTilted, 0.1, 0.5));
  }
}
BENCHMARK(BM_OdeEvolve)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
