#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adiasim/netlist.hpp"

namespace adiasim {

enum class LogicValue : std::uint8_t {
  Zero,
  One,
  Unknown,  // X: conflicting or ambiguous drive
  Floating, // Z: no conductive path to any driver
};

enum class Strength : std::uint8_t {
  Strong,   // full rail level
  Degraded, // one threshold drop from passing through the "wrong" device type
};

char logic_value_char(LogicValue v);

/// Resolved state of one node. The nominal analog level is a pure function of
/// (value, strength): strong 1 sits at V_DD, a degraded 1 at V_DD - V_tn, a
/// degraded 0 at |V_tp|, a strong 0 at 0. X/Z carry their previous level so
/// energy accounting stays well defined.
struct NodeState {
  LogicValue value = LogicValue::Floating;
  Strength strength = Strength::Strong;
  double level = 0.0;

  bool driven() const {
    return value == LogicValue::Zero || value == LogicValue::One;
  }

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

/// Phase of the trapezoidal power clock. DC netlists ignore this.
enum class ClockPhase : std::uint8_t { Evaluate, Hold, Recover, Wait };

struct EvalConfig {
  double vdd = 1.8;
  double vtn = 0.4;
  double vtp = -0.4;
  /// Fixed-point iteration budget; 0 selects 4 x node count.
  int max_iterations = 0;
  ClockPhase clock_phase = ClockPhase::Evaluate;
};

enum class SwitchState : std::uint8_t { Off, On, MaybeOn };

/// Channel conduction from the gate state alone: an NMos conducts on a gate
/// value of One (strong or degraded), a PMos on Zero. An X or Z gate makes the
/// switch MaybeOn; evaluate() then considers both cases and reports X wherever
/// they disagree.
SwitchState switch_state(const Device& device, const NodeState& gate_state);

/// True exactly when the switch is definitely conducting.
bool switch_is_on(const Device& device, const NodeState& gate_state);

struct EvalResult {
  std::vector<NodeState> states;           // indexed by NodeId
  /// Pinned node (rail or input pin) that sources each node's value, or
  /// NodeId::npos for pinned, X and Z nodes. This is the terminal the
  /// charging-path resistance is measured against.
  std::vector<std::uint32_t> driver;
  int iterations = 0;

  const NodeState& operator[](NodeId id) const { return states[id.index]; }
};

/// Computes the steady-state value of every node by iterating rail/pin
/// connectivity through conducting switches to a fixed point.
///
/// `inputs` assigns Zero/One to the netlist's input pins in list order.
/// Nodes unreachable from any driver are Z, or keep their previous state when
/// `prev` is supplied (charge retention; what makes cross-coupled latches
/// resolvable). During the Evaluate phase of a power-clocked netlist the
/// function-block paths are settled before the clock-side PMOS devices are
/// enabled, mirroring how a rising power clock feeds n-trees before sourcing
/// PMOS conduction; the returned map is a fixed point of the full network.
///
/// Throws MissingInput, and NonConvergence naming the oscillating nodes.
EvalResult evaluate(const Netlist& netlist, std::span<const LogicValue> inputs,
                    const EvalConfig& cfg,
                    const std::vector<NodeState>* prev = nullptr);

/// All-nodes-discharged state: the power-up condition used as the cold start
/// for power-clocked netlists.
std::vector<NodeState> discharged_state(const Netlist& netlist);

struct TruthTable {
  std::vector<std::string> input_names;  // primary inputs only
  std::vector<std::string> output_names;
  /// One entry per input combination, ascending binary order (first input is
  /// the most significant bit); each row holds the output states in
  /// output_names order.
  std::vector<std::vector<NodeState>> rows;

  std::string to_csv() const;
};

/// Enumerates all 2^k input rows. An input pin named "n<X>" where <X> is
/// another input pin is treated as its ideal complement and tracks it instead
/// of being enumerated. Power-clocked netlists run each row through a full
/// Evaluate -> Hold -> Recover -> Wait sequence (outputs sampled at Hold);
/// with `warm` the per-row state carries over instead of restarting cold.
TruthTable truth_table(const Netlist& netlist, const EvalConfig& cfg,
                       bool warm = false);

/// One input vector settled through a full clock cycle.
struct CycleStates {
  EvalResult hold; // outputs valid here
  EvalResult wait; // end-of-cycle state, feeds the next cycle's prev
};

/// Settles `inputs` from `prev` (cold when null: combinational for DC
/// netlists, discharged for power-clocked ones) and runs the four-phase clock
/// sequence when the netlist has a power clock. For DC netlists hold == wait.
CycleStates settle_cycle(const Netlist& netlist, std::span<const LogicValue> inputs,
                         const EvalConfig& cfg,
                         const std::vector<NodeState>* prev = nullptr);

/// Primary/complement pin split used by truth_table: pins named n<base> track
/// their base pin. Returns indices into netlist.inputs().
struct InputPairing {
  std::vector<std::uint32_t> primary;                // positions of enumerated pins
  std::vector<std::pair<std::uint32_t, std::uint32_t>> complements; // (pin, primary it tracks)
};
InputPairing pair_inputs(const Netlist& netlist);

/// Expands values for the primary pins into a full input assignment.
std::vector<LogicValue> expand_inputs(const InputPairing& pairing,
                                      std::size_t input_count,
                                      std::span<const LogicValue> primary_values);

} // namespace adiasim
