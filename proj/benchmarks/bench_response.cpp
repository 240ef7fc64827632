#include <benchmark/benchmark.h>

#include "common.hpp"
#include "twinex/oracle.hpp"
#include "twinex/response.hpp"

using namespace twinex;

namespace {

LightSpec light(LightKind k) { return {k, 12400.0, 11200.0, 30.0, 1.0}; }

// range(0): model index, range(1): light kind
void BM_RhoF(benchmark::State& state) {
  const ExcitonModel& m = bench_model(kModels[state.range(0)]);
  const LightSpec s = light(static_cast<LightKind>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(rho_f_fourth(m, s));
  state.SetLabel(std::string(kModels[state.range(0)]) + "/" + to_string(s.kind));
}
BENCHMARK(BM_RhoF)->ArgsProduct({{0, 1, 2}, {0, 1, 2}})->Unit(benchmark::kMicrosecond);

void BM_RhoE4(benchmark::State& state) {
  const ExcitonModel& m = bench_model(kModels[state.range(0)]);
  const LightSpec s = light(static_cast<LightKind>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(rho_e_fourth(m, s));
  state.SetLabel(std::string(kModels[state.range(0)]) + "/" + to_string(s.kind));
}
BENCHMARK(BM_RhoE4)->ArgsProduct({{0, 1, 2}, {0, 1, 2}})->Unit(benchmark::kMicrosecond);

void BM_RhoE2(benchmark::State& state) {
  const ExcitonModel& m = bench_model(kModels[state.range(0)]);
  const LightSpec s = light(LightKind::Twin);
  for (auto _ : state) benchmark::DoNotOptimize(rho_e_second_order(m, s));
}
BENCHMARK(BM_RhoE2)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_OracleFIII(benchmark::State& state) {
  const ExcitonModel& m = bench_model("homodimer");
  OracleConfig cfg;
  cfg.n_steps = static_cast<int>(state.range(0));
  cfg.refinements = 0;
  cfg.tolerance = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(time_domain_oracle(m, light(LightKind::Twin), OracleTerm::FIII, cfg));
}
BENCHMARK(BM_OracleFIII)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
