#include <benchmark/benchmark.h>

#include "dobac/scenario.hpp"
#include "dobac/sim.hpp"

namespace {

// One full closed-loop step (evaluate, freeze, integrate) on the preset.
void BM_Step(benchmark::State& state) {
  const dobac::SimModel M = dobac::SimModel::build(dobac::scenario_preset("msd-cubic-paper"));
  dobac::ClosedLoopState s = dobac::initial_state(M);
  const double h = M.sc.sim.h;
  for (auto _ : state) {
    dobac::StepResult r = dobac::advance(s, M, h);
    benchmark::DoNotOptimize(r.next.y.data());
    s = std::move(r.next);
    if (s.t > 40.0) s = dobac::initial_state(M);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Step);

// Whole-horizon throughput at a shorter horizon to keep iterations cheap.
void BM_Simulate(benchmark::State& state) {
  dobac::ScenarioConfig sc = dobac::scenario_preset("msd-cubic-paper");
  sc.sim.t_end = 5.0;
  sc.sim.decimate = 50;
  for (auto _ : state) {
    dobac::RunLog log = dobac::simulate(sc);
    benchmark::DoNotOptimize(log.data.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(5.0 / sc.sim.h));
}
BENCHMARK(BM_Simulate);

}  // namespace

BENCHMARK_MAIN();
