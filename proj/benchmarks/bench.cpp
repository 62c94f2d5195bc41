#include <benchmark/benchmark.h>

#include "icsim/analysis.hpp"
#include "icsim/experiments.hpp"
#include "icsim/message.hpp"
#include "icsim/sim.hpp"

namespace {

using namespace icsim;

void BM_SlotStep(benchmark::State& state) {
  IntersectionGeometry geom;
  MachineParams mp;
  ProtocolMachine m(1, Route{LaneIn::H1R, LaneOut::H3L}, &geom, mp);
  LocalView view;
  view.pose = {-400.0, 12.0, 0.0};
  view.belief = {-400.0, 1.0};
  view.cond1 = true;
  int slot = 0;
  for (auto _ : state) {
    auto out = m.slot_step(view, {}, ++slot);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_SlotStep);

void BM_Codec(benchmark::State& state) {
  Message msg = make_enter(7, {LaneIn::H2R, LaneOut::H4L, 41.83});
  for (auto _ : state) {
    auto bytes = encode(msg);
    auto back = decode(bytes);
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_Codec);

void BM_ScenarioRun(benchmark::State& state) {
  ScenarioConfig cfg = burst_scenario(0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto res = run(cfg);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_ScenarioRun)->Arg(0)->Arg(3)->Arg(10);

void BM_ExpectedDelaySweep(benchmark::State& state) {
  DelaySweepSpec spec;
  spec.distances = DelaySweepSpec::default_distances();
  spec.xis = {0.0, 0.5, 0.7, 0.9};
  for (auto _ : state) {
    auto rows = delay_sweep(spec);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_ExpectedDelaySweep);

void BM_RandomizedScenario(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    auto res = run(randomized_scenario(i++ % 64));
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_RandomizedScenario);

}  // namespace

BENCHMARK_MAIN();
