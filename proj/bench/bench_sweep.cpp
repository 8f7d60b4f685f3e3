// Serial reference sweep against the OpenMP sweep on the same suites.

#include <benchmark/benchmark.h>

#include "c2e/suites.hpp"

using namespace c2e;

namespace {

SuiteRequest request(const std::string& suite, const std::string& chart) {
  SuiteRequest r;
  r.suite = suite;
  r.chart = chart;
  r.sweep = {8, 2, 1, 1e-7};
  return r;
}

void run(benchmark::State& state, const SuiteRequest& r, Execution exec) {
  for (auto _ : state) {
    VerificationReport rep = run_suite(r, exec);
    benchmark::DoNotOptimize(rep);
  }
}

void BM_IdentitiesSerial(benchmark::State& s) { run(s, request("identities", "perturbed:1"), Execution::Serial); }
void BM_IdentitiesParallel(benchmark::State& s) { run(s, request("identities", "perturbed:1"), Execution::Parallel); }
void BM_OnesolSerial(benchmark::State& s) { run(s, request("onesol", "s2xs2"), Execution::Serial); }
void BM_OnesolParallel(benchmark::State& s) { run(s, request("onesol", "s2xs2"), Execution::Parallel); }

}  // namespace

BENCHMARK(BM_IdentitiesSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IdentitiesParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OnesolSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_OnesolParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
