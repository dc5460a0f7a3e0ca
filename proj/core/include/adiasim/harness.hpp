#pragma once

#include <span>
#include <string>
#include <vector>

#include "adiasim/adders.hpp"
#include "adiasim/energy.hpp"
#include "adiasim/netlist.hpp"
#include "adiasim/switch_eval.hpp"

namespace adiasim {

/// Input stimulus: a sequence of primary-input vectors driven one per clock
/// cycle (or cycles_per_vector each); consecutive vectors form the simulated
/// transitions.
struct StimulusPlan {
  std::vector<std::vector<LogicValue>> vectors;
  int cycles_per_vector = 1;
  double f_clk = 50e6;
};

/// Default 3-input plan: an Euler tour over the complete transition digraph,
/// so every ordered pair of 3-bit vectors (all 64, self-pairs included)
/// appears exactly once. 65 vectors, 64 cycles, deterministic order.
StimulusPlan default_plan(double f_clk = 50e6);

struct PowerMeterConfig {
  enum class Mode { ExactIntegration, RcMeter };

  Mode mode = Mode::ExactIntegration;
  /// RC meter element values; the settled capacitor voltage reads the average
  /// supply current. Defaults keep the ripple (one clock period over the
  /// meter time constant) well under 1% at 50 MHz.
  double meter_r = 100e3;
  double meter_c = 100e-12;
};

struct HarnessConfig {
  EvalConfig eval;
  /// Power-clock ramp time as a fraction of the period (evaluate and recover
  /// edges of the trapezoid).
  double ramp_fraction = 0.25;
  double i_sc = 0.0;   // constant short-circuit current for DC supplies
  double i_leak = 0.0; // constant leakage current for DC supplies
};

/// Energy of one transition: settles from_vec, switches to to_vec through a
/// full clock cycle, and books a TransitionEvent for every node whose level
/// moved between the two settled (hold-phase) states. DC circuits charge
/// against the rail as a step supply; power-clocked circuits against a ramp
/// of T = ramp_fraction / f. Path resistances come from the conducting
/// switch network of the settled state.
EnergyReport run_cycle(const AdderSpec& spec, std::span<const LogicValue> from_vec,
                       std::span<const LogicValue> to_vec, double f,
                       const HarnessConfig& cfg);

/// Per-cycle reports for a whole plan, with node state carried across cycles.
std::vector<EnergyReport> run_plan(const AdderSpec& spec, const StimulusPlan& plan,
                                   const HarnessConfig& cfg);

/// Average power over the plan. ExactIntegration divides the summed cycle
/// energies by the simulated time; RcMeter replays the per-cycle charge into
/// the meter RC and reads the settled capacitor voltage. The two agree within
/// the meter ripple bound, about (clock period) / (meter R*C).
double average_power(const AdderSpec& spec, const StimulusPlan& plan,
                     const PowerMeterConfig& meter, const HarnessConfig& cfg);

struct SweepPoint {
  double f_hz = 0.0;
  double avg_power_w = 0.0;
  double energy_per_cycle_j = 0.0;
};

struct SweepResult {
  AdderKind circuit;
  std::vector<SweepPoint> points; // strictly increasing frequency
};

/// Repeats the plan at `points` log-spaced frequencies in [f_min, f_max].
/// Points run concurrently and merge in frequency order.
SweepResult frequency_sweep(const AdderSpec& spec, double f_min, double f_max,
                            int points, const StimulusPlan& plan_template,
                            const PowerMeterConfig& meter, const HarnessConfig& cfg);

struct ComparisonRow {
  AdderKind kind;
  int devices = 0;
  double avg_power_w = 0.0;
};

/// One row per adder kind under an identical plan: device count and average
/// power at f_clk.
std::vector<ComparisonRow> comparison_table(std::span<const AdderKind> kinds,
                                            double f_clk,
                                            const PowerMeterConfig& meter,
                                            const HarnessConfig& cfg);

/// CSV serializations; floats carry 9 significant digits.
std::string sweep_csv(std::span<const SweepResult> results);
std::string comparison_csv(std::span<const ComparisonRow> rows);

/// snprintf %.9g
std::string format_sig9(double value);

} // namespace adiasim
