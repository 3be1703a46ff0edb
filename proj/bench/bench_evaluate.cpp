#include <benchmark/benchmark.h>

#include "wcmdp/casestudy.hpp"
#include "wcmdp/simulator.hpp"

using namespace wcmdp;

namespace {

void counterexample(benchmark::State& state, bool parallel) {
  const Counterexample c = build_counterexample(0.5);
  const PolicyConfig pc{PolicyKind::lp_update_full, RoundingMode::floor, false};
  for (auto _ : state) {
    const CampaignResult r = parallel ? evaluate(c.model, pc, c.m0, state.range(0), 2000, 1)
                                      : evaluate_serial(c.model, pc, c.m0, state.range(0), 2000, 1);
    benchmark::DoNotOptimize(r.mean);
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}

void screening(benchmark::State& state, bool parallel) {
  static const ScreeningModel sm = build_screening_model(screening_preset("scarce", false));
  const PolicyConfig pc{PolicyKind::occupation, RoundingMode::floor, false};
  for (auto _ : state) {
    const CampaignResult r = parallel ? evaluate(sm.model, pc, sm.m0, state.range(0), 400, 1)
                                      : evaluate_serial(sm.model, pc, sm.m0, state.range(0), 400, 1);
    benchmark::DoNotOptimize(r.mean);
  }
  state.SetItemsProcessed(state.iterations() * 400);
}

}  // namespace

BENCHMARK_CAPTURE(counterexample, serial, false)->Arg(100)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(counterexample, parallel, true)->Arg(100)->Arg(1600)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(screening, serial, false)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(screening, parallel, true)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
