#include "adiasim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

#include "adiasim/resistnet.hpp"

namespace adiasim {

namespace {

std::vector<LogicValue> bits3(int v) {
  return {((v >> 2) & 1) ? LogicValue::One : LogicValue::Zero,
          ((v >> 1) & 1) ? LogicValue::One : LogicValue::Zero,
          (v & 1) ? LogicValue::One : LogicValue::Zero};
}

// Settled states of consecutive cycles plus the event bookkeeping between
// them.
EnergyReport events_between(const Netlist& net, SupplyRegime regime,
                            const EvalResult& from_hold, const EvalResult& to_hold,
                            double f, const HarnessConfig& cfg) {
  EnergyReport report;
  const double vdd = cfg.eval.vdd;
  for (std::uint32_t i = 0; i < net.node_count(); ++i) {
    const NodeState& before = from_hold.states[i];
    const NodeState& after = to_hold.states[i];
    if (before.level == after.level) continue;

    TransitionEvent event;
    event.node = NodeId(i);
    event.c = net.node(NodeId(i)).capacitance;
    event.delta_v = std::abs(after.level - before.level);
    event.direction = after.level > before.level ? TransitionDirection::Charge
                                                 : TransitionDirection::Discharge;

    const std::uint32_t driver = to_hold.driver[i];
    const Node& node = net.node(NodeId(i));
    const bool externally_driven = node.role == NodeRole::Input;
    if (externally_driven || driver == NodeId::npos) {
      // Input pins are charged by the stimulus source, not by the circuit;
      // nodes without a conducting path carry no event energy.
      event.r_path = std::numeric_limits<double>::infinity();
      event.supply = DcStep{vdd};
    } else {
      event.r_path = effective_resistance(
          from_on_switches(net, to_hold.states, NodeId(driver), NodeId(i)));
      if (regime == SupplyRegime::Dc) {
        event.supply = DcStep{vdd};
      } else {
        const double period = 1.0 / f;
        event.supply = Ramp{vdd, cfg.ramp_fraction * period, period};
        // The ramp sweeps through any level inside its excursion, so only
        // charge parked above the rising edge's start dumps non-adiabatically.
        event.v_mismatch =
            event.direction == TransitionDirection::Charge ? before.level : 0.0;
      }
    }
    report.add_event(event);
  }
  if (regime == SupplyRegime::Dc)
    report.add_static(cfg.i_sc * vdd / f, cfg.i_leak * vdd / f);
  return report;
}

std::vector<std::vector<LogicValue>> expanded_vectors(const StimulusPlan& plan) {
  std::vector<std::vector<LogicValue>> out;
  out.reserve(plan.vectors.size() * std::max(1, plan.cycles_per_vector));
  for (const auto& v : plan.vectors)
    for (int i = 0; i < std::max(1, plan.cycles_per_vector); ++i)
      out.push_back(v);
  return out;
}

std::vector<EnergyReport> run_chain(const AdderSpec& spec,
                                    const std::vector<std::vector<LogicValue>>& seq,
                                    double f, const HarnessConfig& cfg) {
  if (seq.size() < 2)
    throw SimError(ErrorKind::InvalidValue,
                   "stimulus needs at least two vectors");
  if (!(f > 0.0))
    throw SimError(ErrorKind::InvalidValue, "clock frequency must be positive");
  if (!(cfg.ramp_fraction > 0.0 && cfg.ramp_fraction <= 0.5))
    throw SimError(ErrorKind::InvalidValue,
                   "ramp_fraction must lie in (0, 0.5] so both ramps fit the "
                   "period");
  const Netlist& net = spec.netlist;
  const InputPairing pairing = pair_inputs(net);

  auto expand = [&](const std::vector<LogicValue>& primary) {
    if (primary.size() != pairing.primary.size())
      throw SimError(ErrorKind::MissingInput,
                     "stimulus vector width " + std::to_string(primary.size()) +
                     " does not match " + std::to_string(pairing.primary.size()) +
                     " primary inputs");
    return expand_inputs(pairing, net.inputs().size(), primary);
  };

  std::vector<EnergyReport> reports;
  reports.reserve(seq.size() - 1);
  CycleStates state = settle_cycle(net, expand(seq[0]), cfg.eval);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    CycleStates next = settle_cycle(net, expand(seq[i]), cfg.eval, &state.wait.states);
    reports.push_back(events_between(net, spec.supply_regime, state.hold,
                                     next.hold, f, cfg));
    state = std::move(next);
  }
  return reports;
}

double rc_meter_power(const std::vector<EnergyReport>& cycles, double f,
                      const PowerMeterConfig& meter, double vdd) {
  // Per-cycle supply charge pushed into the parallel RC; the settled average
  // capacitor voltage reads the mean supply current.
  const double tau = meter.meter_r * meter.meter_c;
  const double dt = 1.0 / f;
  const double decay = std::exp(-dt / tau);
  double v = 0.0;
  double prev_avg = -1.0;
  for (int pass = 0; pass < 100000; ++pass) {
    double sum = 0.0;
    for (const EnergyReport& r : cycles) {
      v = v * decay + r.total / (vdd * meter.meter_c);
      sum += v;
    }
    double avg = sum / static_cast<double>(cycles.size());
    if (pass > 0 && std::abs(avg - prev_avg) <= 1e-12 * std::max(avg, 1e-300))
      return avg * vdd / meter.meter_r;
    prev_avg = avg;
  }
  return prev_avg * vdd / meter.meter_r;
}

} // namespace

StimulusPlan default_plan(double f_clk) {
  // Hierholzer's algorithm on the complete 8-vertex transition digraph
  // (self-loops included): an Euler circuit hits every ordered pair once.
  std::array<int, 8> next_target{};
  std::vector<int> stack{0}, circuit;
  while (!stack.empty()) {
    int u = stack.back();
    if (next_target[u] < 8) {
      stack.push_back(next_target[u]++);
    } else {
      circuit.push_back(u);
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());

  StimulusPlan plan;
  plan.f_clk = f_clk;
  plan.vectors.reserve(circuit.size());
  for (int v : circuit) plan.vectors.push_back(bits3(v));
  return plan;
}

EnergyReport run_cycle(const AdderSpec& spec, std::span<const LogicValue> from_vec,
                       std::span<const LogicValue> to_vec, double f,
                       const HarnessConfig& cfg) {
  std::vector<std::vector<LogicValue>> seq{
      std::vector<LogicValue>(from_vec.begin(), from_vec.end()),
      std::vector<LogicValue>(to_vec.begin(), to_vec.end())};
  return run_chain(spec, seq, f, cfg).front();
}

std::vector<EnergyReport> run_plan(const AdderSpec& spec, const StimulusPlan& plan,
                                   const HarnessConfig& cfg) {
  return run_chain(spec, expanded_vectors(plan), plan.f_clk, cfg);
}

double average_power(const AdderSpec& spec, const StimulusPlan& plan,
                     const PowerMeterConfig& meter, const HarnessConfig& cfg) {
  std::vector<EnergyReport> cycles = run_plan(spec, plan, cfg);
  if (meter.mode == PowerMeterConfig::Mode::RcMeter) {
    if (!(meter.meter_r > 0.0) || !(meter.meter_c > 0.0))
      throw SimError(ErrorKind::InvalidValue,
                     "RC meter needs positive R and C");
    return rc_meter_power(cycles, plan.f_clk, meter, cfg.eval.vdd);
  }
  double energy = 0.0;
  for (const EnergyReport& r : cycles) energy += r.total;
  return energy * plan.f_clk / static_cast<double>(cycles.size());
}

SweepResult frequency_sweep(const AdderSpec& spec, double f_min, double f_max,
                            int points, const StimulusPlan& plan_template,
                            const PowerMeterConfig& meter, const HarnessConfig& cfg) {
  if (!(0.0 < f_min && f_min < f_max))
    throw SimError(ErrorKind::InvalidValue,
                   "sweep needs 0 < f_min < f_max");
  if (points < 2)
    throw SimError(ErrorKind::InvalidValue, "sweep needs at least 2 points");

  std::vector<double> freqs(points);
  for (int i = 0; i < points; ++i)
    freqs[i] = f_min * std::pow(f_max / f_min,
                                static_cast<double>(i) / (points - 1));

  // Points are independent; futures are collected in frequency order.
  std::vector<std::future<SweepPoint>> futures;
  futures.reserve(points);
  for (int i = 0; i < points; ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      StimulusPlan plan = plan_template;
      plan.f_clk = freqs[i];
      std::vector<EnergyReport> cycles = run_plan(spec, plan, cfg);
      double energy = 0.0;
      for (const EnergyReport& r : cycles) energy += r.total;
      double per_cycle = energy / static_cast<double>(cycles.size());
      double power = meter.mode == PowerMeterConfig::Mode::RcMeter
                         ? rc_meter_power(cycles, plan.f_clk, meter, cfg.eval.vdd)
                         : per_cycle * plan.f_clk;
      return SweepPoint{freqs[i], power, per_cycle};
    }));
  }
  SweepResult result;
  result.circuit = spec.kind;
  for (auto& f : futures) result.points.push_back(f.get());
  return result;
}

std::vector<ComparisonRow> comparison_table(std::span<const AdderKind> kinds,
                                            double f_clk,
                                            const PowerMeterConfig& meter,
                                            const HarnessConfig& cfg) {
  if (kinds.empty())
    throw SimError(ErrorKind::InvalidValue, "no circuits selected");
  std::vector<ComparisonRow> rows;
  rows.reserve(kinds.size());
  for (AdderKind kind : kinds) {
    AdderSpec spec = build(kind);
    StimulusPlan plan = default_plan(f_clk);
    rows.push_back({kind, static_cast<int>(spec.netlist.device_count()),
                    average_power(spec, plan, meter, cfg)});
  }
  return rows;
}

std::string format_sig9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string sweep_csv(std::span<const SweepResult> results) {
  std::ostringstream out;
  out << "circuit,f_hz,avg_power_w,energy_per_cycle_j\n";
  std::size_t max_points = 0;
  for (const SweepResult& r : results)
    max_points = std::max(max_points, r.points.size());
  for (std::size_t i = 0; i < max_points; ++i) {
    for (const SweepResult& r : results) {
      if (i >= r.points.size()) continue;
      const SweepPoint& p = r.points[i];
      out << adder_kind_name(r.circuit) << "," << format_sig9(p.f_hz) << ","
          << format_sig9(p.avg_power_w) << ","
          << format_sig9(p.energy_per_cycle_j) << "\n";
    }
  }
  return out.str();
}

std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::ostringstream out;
  out << "circuit,devices,avg_power_w\n";
  for (const ComparisonRow& r : rows)
    out << adder_kind_name(r.kind) << "," << r.devices << ","
        << format_sig9(r.avg_power_w) << "\n";
  return out.str();
}

} // namespace adiasim
