#include <benchmark/benchmark.h>

#include "adiasim/adders.hpp"
#include "adiasim/harness.hpp"
#include "adiasim/resistnet.hpp"
#include "adiasim/switch_eval.hpp"

using namespace adiasim;

static void BM_EvaluateCmos28(benchmark::State& state) {
  AdderSpec spec = build(AdderKind::Cmos28);
  EvalConfig cfg;
  std::vector<LogicValue> inputs{LogicValue::One, LogicValue::Zero,
                                 LogicValue::One};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(spec.netlist, inputs, cfg));
  }
}
BENCHMARK(BM_EvaluateCmos28);

static void BM_TruthTablePfal(benchmark::State& state) {
  AdderSpec spec = build(AdderKind::Pfal);
  EvalConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(truth_table(spec.netlist, cfg));
  }
}
BENCHMARK(BM_TruthTablePfal);

static void BM_EffectiveResistanceLadder(benchmark::State& state) {
  // n-section RC-less resistor ladder
  ConductanceNetwork net;
  const std::uint32_t n = static_cast<std::uint32_t>(state.range(0));
  net.node_count = n + 1;
  net.terminal_a = 0;
  net.terminal_b = n;
  for (std::uint32_t i = 0; i < n; ++i) {
    net.edges.push_back({i, i + 1, 1e-4});
    if (i + 2 <= n) net.edges.push_back({i, i + 2, 5e-5});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(effective_resistance(net));
  }
}
BENCHMARK(BM_EffectiveResistanceLadder)->Arg(16)->Arg(64);

static void BM_RunCycleTgal(benchmark::State& state) {
  AdderSpec spec = build(AdderKind::Tgal);
  HarnessConfig cfg;
  std::vector<LogicValue> from{LogicValue::Zero, LogicValue::Zero,
                               LogicValue::Zero};
  std::vector<LogicValue> to{LogicValue::One, LogicValue::One, LogicValue::One};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_cycle(spec, from, to, 50e6, cfg));
  }
}
BENCHMARK(BM_RunCycleTgal);

static void BM_AveragePowerCmos28(benchmark::State& state) {
  AdderSpec spec = build(AdderKind::Cmos28);
  HarnessConfig cfg;
  PowerMeterConfig meter;
  StimulusPlan plan = default_plan(50e6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(average_power(spec, plan, meter, cfg));
  }
}
BENCHMARK(BM_AveragePowerCmos28);

BENCHMARK_MAIN();
