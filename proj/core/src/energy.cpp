#include "adiasim/energy.hpp"

#include <cmath>

#include "json.hpp"

namespace adiasim {

PowerBreakdown conventional_power(const OperatingPoint& op) {
  PowerBreakdown p;
  p.dynamic = op.activity * op.c_load * op.vdd * op.vdd * op.f_clk;
  p.short_circuit = op.i_sc * op.vdd;
  p.leakage = op.i_leak * op.vdd;
  return p;
}

double conventional_event_energy(double c, double delta_v) {
  return 0.5 * c * delta_v * delta_v;
}

double cc_voltage(double i_s, double c, double t) {
  if (!(c > 0.0))
    throw SimError(ErrorKind::ZeroCapacitance,
                   "constant-current voltage needs a positive capacitance");
  return i_s * t / c;
}

double cc_dissipation(double r, double i_s, double t_total) {
  return r * i_s * i_s * t_total;
}

double ramp_dissipation(double r, double c, double t_ramp, double v_final) {
  if (!(t_ramp > 0.0))
    throw SimError(ErrorKind::InvalidValue, "ramp time must be positive");
  return (r * c / t_ramp) * c * v_final * v_final;
}

double stepwise_dissipation(double c, double vdd, int n) {
  if (n < 1)
    throw SimError(ErrorKind::InvalidValue, "step count must be at least 1");
  return c * vdd * vdd / (2.0 * n);
}

EventEnergy event_energy(const TransitionEvent& event) {
  EventEnergy out;
  if (std::isinf(event.r_path)) return out; // no path, no event

  if (std::holds_alternative<DcStep>(event.supply)) {
    out.dynamic = conventional_event_energy(event.c, event.delta_v);
  } else if (const Ramp* ramp = std::get_if<Ramp>(&event.supply)) {
    out.adiabatic = ramp_dissipation(event.r_path, event.c, ramp->ramp_time,
                                     event.delta_v);
    out.non_adiabatic = 0.5 * event.c * event.v_mismatch * event.v_mismatch;
  } else if (const Stepwise* sw = std::get_if<Stepwise>(&event.supply)) {
    out.non_adiabatic = stepwise_dissipation(event.c, event.delta_v, sw->steps);
  } else if (const ConstantCurrent* cc = std::get_if<ConstantCurrent>(&event.supply)) {
    out.adiabatic = cc_dissipation(event.r_path, cc->i_s, cc->duration);
  }
  return out;
}

void EnergyReport::add_event(const TransitionEvent& event) {
  EventEnergy e = event_energy(event);
  dynamic += e.dynamic;
  adiabatic_loss += e.adiabatic;
  non_adiabatic_loss += e.non_adiabatic;
  total += e.total();
  events.push_back({event, e.total()});
}

void EnergyReport::add_static(double short_circuit_j, double leakage_j) {
  short_circuit += short_circuit_j;
  leakage += leakage_j;
  total += short_circuit_j + leakage_j;
}

std::string EnergyReport::to_json(const Netlist& netlist) const {
  nlohmann::json j;
  j["total_j"] = total;
  j["dynamic_j"] = dynamic;
  j["adiabatic_loss_j"] = adiabatic_loss;
  j["non_adiabatic_loss_j"] = non_adiabatic_loss;
  j["short_circuit_j"] = short_circuit;
  j["leakage_j"] = leakage;
  nlohmann::json evs = nlohmann::json::array();
  for (const auto& [event, joules] : events) {
    nlohmann::json e;
    e["node"] = netlist.node(event.node).name;
    e["c_f"] = event.c;
    e["delta_v"] = event.delta_v;
    e["r_path_ohm"] = std::isinf(event.r_path) ? -1.0 : event.r_path;
    e["direction"] =
        event.direction == TransitionDirection::Charge ? "charge" : "discharge";
    e["supply"] = std::holds_alternative<DcStep>(event.supply) ? "dc"
                  : std::holds_alternative<Ramp>(event.supply) ? "ramp"
                  : std::holds_alternative<Stepwise>(event.supply) ? "stepwise"
                                                                   : "cc";
    e["v_mismatch"] = event.v_mismatch;
    e["energy_j"] = joules;
    evs.push_back(e);
  }
  j["events"] = evs;
  return j.dump(2);
}

} // namespace adiasim
