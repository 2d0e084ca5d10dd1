#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fast/harness.hpp"
#include "fast/oracle.hpp"
#include "fast/solver.hpp"

namespace {

const fast::TauConstants kTau{8.998912e-05, 1.13491352256394042, 0.131072, 1.124864e-02};
const fast::SplitLimits kMins{1e-3, 0.05, 1e-3};

void BM_OracleSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fast::brute_force_oracle_serial(kTau, kMins, n));
  state.SetItemsProcessed(state.iterations() * (n + 1) * (n + 2) / 2);
}

void BM_OracleParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fast::brute_force_oracle(kTau, kMins, n));
  state.SetItemsProcessed(state.iterations() * (n + 1) * (n + 2) / 2);
}

void BM_Solve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(fast::solve(kTau, kMins));
}

std::vector<double> distances(int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(50.0 + 350.0 * i / (n - 1));
  return v;
}

const std::vector<fast::Method> kMethods{fast::Method::fast, fast::Method::prune, fast::Method::quant};

void BM_SweepSerial(benchmark::State& state) {
  const auto values = distances(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fast::sweep_serial(fast::Scenario{}, fast::SweepAxis::distance, values, kMethods));
  }
}

void BM_SweepParallel(benchmark::State& state) {
  const auto values = distances(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fast::sweep(fast::Scenario{}, fast::SweepAxis::distance, values, kMethods));
  }
}

}  // namespace

BENCHMARK(BM_OracleSerial)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Solve)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
