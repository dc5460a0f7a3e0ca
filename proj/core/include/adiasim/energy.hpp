#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "adiasim/errors.hpp"
#include "adiasim/netlist.hpp"

namespace adiasim {

/// DC rail: step charging, the conventional CMOS case.
struct DcStep {
  double vdd;
};

/// Linear voltage ramp (equivalently a constant charging current): the
/// trapezoidal power-clock edge. ramp_time must fit in half a period so the
/// charge and recovery ramps both fit.
struct Ramp {
  double vdd;
  double ramp_time;
  double period;
};

/// Supply raised in n equal voltage steps.
struct Stepwise {
  double vdd;
  int steps;
  double period;
};

struct ConstantCurrent {
  double i_s;
  double duration;
};

using SupplyWaveform = std::variant<DcStep, Ramp, Stepwise, ConstantCurrent>;

struct OperatingPoint {
  double vdd = 1.8;
  double c_load = 20e-15;
  double f_clk = 50e6;
  double activity = 1.0; // alpha in [0, 1]
  double i_sc = 0.0;     // direct-path short-circuit current
  double i_leak = 0.0;   // leakage current
};

struct PowerBreakdown {
  double dynamic = 0.0;
  double short_circuit = 0.0;
  double leakage = 0.0;

  double total() const { return dynamic + short_circuit + leakage; }
};

/// Total conventional power: alpha * C_L * V_DD^2 * f_clk plus the
/// short-circuit and leakage terms I * V_DD. The dynamic term uses the
/// dimensionally consistent V^2 form.
PowerBreakdown conventional_power(const OperatingPoint& op);

/// Energy burned per step-charging event: C * dV^2 / 2. Even in dV, so charge
/// and discharge cost the same.
double conventional_event_energy(double c, double delta_v);

/// Capacitor voltage under a constant charging current: V(t) = I_S * t / C.
double cc_voltage(double i_s, double c, double t);

/// Energy dissipated in the series resistance by a constant current over
/// t_total: R * I_S^2 * T.
double cc_dissipation(double r, double i_s, double t_total);

/// Dissipation of a linear-ramp charge to v_final over t_ramp through r:
/// (R*C / T) * C * V^2. Equals conventional_event_energy exactly at T = 2RC
/// and keeps shrinking as the ramp slows.
double ramp_dissipation(double r, double c, double t_ramp, double v_final);

/// Total dissipation charging C to vdd in n equal steps: C * V^2 / (2n).
double stepwise_dissipation(double c, double vdd, int n);

enum class TransitionDirection : std::uint8_t { Charge, Discharge };

/// One node whose level moved during a cycle.
struct TransitionEvent {
  NodeId node;
  double c = 0.0;       // farads
  double delta_v = 0.0; // magnitude of the level change
  double r_path = 0.0;  // charging-path resistance; +inf when no path exists
  SupplyWaveform supply = DcStep{0.0};
  TransitionDirection direction = TransitionDirection::Charge;
  /// Potential gap between the node and the supply at the instant the path
  /// closes. A ramp sweeping through a parked level closes at zero gap; a
  /// node holding charge above a ramp that restarts from zero dumps it.
  double v_mismatch = 0.0;
};

struct EventEnergy {
  double dynamic = 0.0;
  double adiabatic = 0.0;
  double non_adiabatic = 0.0;

  double total() const { return dynamic + adiabatic + non_adiabatic; }
};

/// Dispatches on the supply waveform: DcStep events are dynamic, Ramp events
/// dissipate the ramp loss through r_path plus C * v_mismatch^2 / 2 of
/// non-adiabatic loss, Stepwise events count as non-adiabatic step residue,
/// ConstantCurrent as adiabatic. An infinite r_path means no charging path
/// and therefore no energy.
EventEnergy event_energy(const TransitionEvent& event);

/// Per-cycle dissipation, broken into the mechanisms that produced it.
/// total always equals the sum of the components.
struct EnergyReport {
  double total = 0.0;
  double dynamic = 0.0;
  double adiabatic_loss = 0.0;
  double non_adiabatic_loss = 0.0;
  double short_circuit = 0.0;
  double leakage = 0.0;
  std::vector<std::pair<TransitionEvent, double>> events;

  void add_event(const TransitionEvent& event);
  void add_static(double short_circuit_j, double leakage_j);

  /// JSON object with all values in SI units.
  std::string to_json(const Netlist& netlist) const;
};

} // namespace adiasim
