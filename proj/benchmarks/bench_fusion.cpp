#include <benchmark/benchmark.h>

#include "bayesfuse/builtin.hpp"
#include "bayesfuse/montecarlo.hpp"

using namespace bayesfuse;

namespace {

// Rule evaluation throughput over pre-drawn in-distribution inputs.
void BM_FuseGauss(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const auto scenario =
      resolve_scenario_ref("builtin:gauss:u=1,v=1,M=" + std::to_string(M)).scenario;
  const FusionRule rule(scenario);
  const auto batch = mc::draw_batch(*scenario, 4096, ProposalMode::Prior, 1);
  std::size_t l = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rule.fuse(batch.row(l)));
    l = (l + 1) % batch.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FuseGauss)->Arg(2)->Arg(30)->Arg(300);

void BM_FuseFourClass(benchmark::State& state) {
  const auto scenario = resolve_scenario_ref("builtin:fourclass-soft").scenario;
  const FusionRule rule(scenario);
  const auto batch = mc::draw_batch(*scenario, 4096, ProposalMode::Prior, 2);
  std::size_t l = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rule.fuse(batch.row(l)));
    l = (l + 1) % batch.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FuseFourClass);

void BM_FuseMixture(benchmark::State& state) {
  const auto scenario = resolve_scenario_ref("builtin:mixture").scenario;
  const FusionRule rule(scenario);
  const auto batch = mc::draw_batch(*scenario, 4096, ProposalMode::Prior, 3);
  std::size_t l = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rule.fuse(batch.row(l)));
    l = (l + 1) % batch.size();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FuseMixture);

void BM_DrawBatch(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const auto scenario =
      resolve_scenario_ref("builtin:gauss:u=1,v=1,M=" + std::to_string(M)).scenario;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc::draw_batch(*scenario, 8192, ProposalMode::Prior, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * 8192);
}
BENCHMARK(BM_DrawBatch)->Arg(2)->Arg(300);

void BM_RiskEndToEnd(benchmark::State& state) {
  const auto scenario = resolve_scenario_ref("builtin:gauss:u=1,v=1,M=2").scenario;
  const FusionRule rule(scenario);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto batch = mc::draw_batch(*scenario, 65536, ProposalMode::Prior, ++seed);
    benchmark::DoNotOptimize(mc::estimate_risk(rule, batch, scenario->cost(), 0.95));
  }
  state.SetItemsProcessed(state.iterations() * 65536);
}
BENCHMARK(BM_RiskEndToEnd);

}  // namespace

BENCHMARK_MAIN();
