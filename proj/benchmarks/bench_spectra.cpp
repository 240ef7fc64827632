#include <benchmark/benchmark.h>

#include "common.hpp"
#include "twinex/spectra.hpp"

using namespace twinex;

namespace {

void BM_Sweep2d(benchmark::State& state) {
  const ExcitonModel& m = bench_model("rc_like");
  const LightSpec tmpl{static_cast<LightKind>(state.range(0)), 0.0, 11200.0, 30.0, 1.0};
  const Axis wp = Axis::uniform("wp", 21000.0, 26000.0, 250.0);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_2d(m, tmpl, wp, {}, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(wp.count));
}
BENCHMARK(BM_Sweep2d)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Absorption(benchmark::State& state) {
  const ExcitonModel& m = bench_model("rc_like");
  const Axis w = Axis::uniform("w", 9000.0, 14000.0, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(absorption_spectrum(m, w));
}
BENCHMARK(BM_Absorption)->Unit(benchmark::kMicrosecond);

}  // namespace
