#include "adiasim/switch_eval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace adiasim {

namespace {

double level_of(LogicValue value, Strength strength, const EvalConfig& cfg) {
  if (value == LogicValue::One)
    return strength == Strength::Strong ? cfg.vdd : cfg.vdd - cfg.vtn;
  return strength == Strength::Strong ? 0.0 : std::abs(cfg.vtp);
}

NodeState driven_state(LogicValue value, Strength strength, const EvalConfig& cfg) {
  return NodeState{value, strength, level_of(value, strength, cfg)};
}

bool clock_high(ClockPhase phase) {
  return phase == ClockPhase::Evaluate || phase == ClockPhase::Hold;
}

// Passing a One through an NMos (or a Zero through a PMos) costs one
// threshold drop. Drops do not accumulate along a path.
bool degrades(DeviceKind kind, LogicValue carried) {
  return (carried == LogicValue::One && kind == DeviceKind::NMos) ||
         (carried == LogicValue::Zero && kind == DeviceKind::PMos);
}

struct Reach {
  std::vector<char> strong;              // reachable with no degrading hop
  std::vector<char> any;                 // reachable at all
  std::vector<std::uint32_t> src_strong; // first pinned source per node
  std::vector<std::uint32_t> src_any;

  explicit Reach(std::size_t n)
      : strong(n, 0), any(n, 0),
        src_strong(n, NodeId::npos), src_any(n, NodeId::npos) {}
};

struct Edge {
  std::uint32_t other;
  DeviceKind kind;
};

class FixedPoint {
public:
  FixedPoint(const Netlist& netlist, const EvalConfig& cfg,
             const std::vector<NodeState>& pinned_state,
             const std::vector<char>& pinned,
             const std::vector<NodeState>* prev)
      : netlist_(netlist), cfg_(cfg), pinned_state_(pinned_state),
        pinned_(pinned), prev_(prev) {}

  EvalResult run(bool clock_pmos_disabled, int max_iterations) {
    const std::size_t n = netlist_.node_count();
    EvalResult result;
    result.states.resize(n);
    result.driver.assign(n, NodeId::npos);

    std::vector<NodeState> current(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned_[i]) current[i] = pinned_state_[i];
      else if (prev_) current[i] = (*prev_)[i];
      else current[i] = NodeState{LogicValue::Floating, Strength::Strong, 0.0};
    }

    std::vector<NodeState> next(n);
    std::vector<std::uint32_t> driver(n, NodeId::npos);
    for (int pass = 1; pass <= max_iterations; ++pass) {
      step(current, clock_pmos_disabled, next, driver);
      if (next == current) {
        result.states = std::move(next);
        result.driver = std::move(driver);
        result.iterations = pass;
        return result;
      }
      std::swap(current, next);
    }

    std::vector<NodeState> probe(n);
    std::vector<std::uint32_t> probe_driver(n, NodeId::npos);
    step(current, clock_pmos_disabled, probe, probe_driver);
    std::ostringstream names;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(probe[i] == current[i])) {
        if (names.tellp() > 0) names << ", ";
        names << netlist_.node(NodeId(static_cast<std::uint32_t>(i))).name;
      }
    }
    throw SimError(ErrorKind::NonConvergence,
                   "no fixed point after " + std::to_string(max_iterations) +
                   " passes; oscillating nodes (reported as X): " + names.str());
  }

private:
  // One Jacobi pass: recompute every node from the switch states implied by
  // `current`. Order independence of the result comes from the set-based
  // reachability; nothing here depends on declaration order.
  void step(const std::vector<NodeState>& current, bool clock_pmos_disabled,
            std::vector<NodeState>& next, std::vector<std::uint32_t>& driver) {
    const std::size_t n = netlist_.node_count();

    std::vector<std::vector<Edge>> definite(n), possible(n);
    for (const Device& d : netlist_.devices()) {
      if (clock_pmos_disabled && d.kind == DeviceKind::PMos &&
          (netlist_.node(d.source).role == NodeRole::PowerClock ||
           netlist_.node(d.drain).role == NodeRole::PowerClock))
        continue;
      SwitchState s = switch_state(d, current[d.gate.index]);
      if (s == SwitchState::Off) continue;
      Edge forward{d.drain.index, d.kind};
      Edge backward{d.source.index, d.kind};
      possible[d.source.index].push_back(forward);
      possible[d.drain.index].push_back(backward);
      if (s == SwitchState::On) {
        definite[d.source.index].push_back(forward);
        definite[d.drain.index].push_back(backward);
      }
    }

    Reach reach[2][2] = {{Reach(n), Reach(n)}, {Reach(n), Reach(n)}};
    for (int vi = 0; vi < 2; ++vi) {
      LogicValue v = vi ? LogicValue::One : LogicValue::Zero;
      flood(v, definite, reach[0][vi]);
      flood(v, possible, reach[1][vi]);
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (pinned_[i]) {
        next[i] = pinned_state_[i];
        driver[i] = NodeId::npos;
        continue;
      }
      next[i] = resolve(static_cast<std::uint32_t>(i), reach[0], reach[1],
                        driver[i]);
    }
  }

  // Multi-source BFS from every pin driving `v`. Paths never continue through
  // another pinned node: pins are sources, not wires. The strong set follows
  // only non-degrading hops.
  void flood(LogicValue v, const std::vector<std::vector<Edge>>& adj, Reach& r) {
    const std::size_t n = netlist_.node_count();
    std::deque<std::uint32_t> queue;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (pinned_[i] && pinned_state_[i].value == v) {
        r.strong[i] = 1;
        r.any[i] = 1;
        r.src_strong[i] = i;
        r.src_any[i] = i;
        queue.push_back(i);
      }
    }
    auto visit = queue;
    while (!visit.empty()) {
      std::uint32_t u = visit.front();
      visit.pop_front();
      for (const Edge& e : adj[u]) {
        if (pinned_[e.other] || degrades(e.kind, v)) continue;
        if (!r.strong[e.other]) {
          r.strong[e.other] = 1;
          r.src_strong[e.other] = r.src_strong[u];
          visit.push_back(e.other);
        }
      }
    }
    while (!queue.empty()) {
      std::uint32_t u = queue.front();
      queue.pop_front();
      for (const Edge& e : adj[u]) {
        if (pinned_[e.other]) continue;
        if (!r.any[e.other]) {
          r.any[e.other] = 1;
          r.src_any[e.other] = r.src_any[u];
          queue.push_back(e.other);
        }
      }
    }
  }

  NodeState resolve(std::uint32_t i, const Reach def[2], const Reach pos[2],
                    std::uint32_t& driver) const {
    driver = NodeId::npos;
    const bool d0 = def[0].any[i], d1 = def[1].any[i];
    const Strength s0 = def[0].strong[i] ? Strength::Strong : Strength::Degraded;
    const Strength s1 = def[1].strong[i] ? Strength::Strong : Strength::Degraded;

    NodeState prev_state = prev_ ? (*prev_)[i]
                                 : NodeState{LogicValue::Floating,
                                             Strength::Strong, 0.0};
    auto unknown = [&] {
      return NodeState{LogicValue::Unknown, Strength::Strong, prev_state.level};
    };

    if (d0 && d1) {
      if (s0 == s1) return unknown(); // equal-strength fight
      int winner = (s1 == Strength::Strong) ? 1 : 0;
      // A maybe-on path at full strength could still flip the loser back in.
      int loser = 1 - winner;
      if (pos[loser].strong[i]) return unknown();
      driver = def[winner].src_strong[i];
      return driven_state(winner ? LogicValue::One : LogicValue::Zero,
                          Strength::Strong, cfg_);
    }
    if (d0 || d1) {
      const int v = d1 ? 1 : 0;
      const Strength s = d1 ? s1 : s0;
      const Reach& other = pos[1 - v];
      if (other.any[i]) {
        Strength so = other.strong[i] ? Strength::Strong : Strength::Degraded;
        if (!(so == Strength::Degraded && s == Strength::Strong))
          return unknown(); // the maybe-case would win or tie
      }
      driver = (s == Strength::Strong) ? def[v].src_strong[i] : def[v].src_any[i];
      return driven_state(v ? LogicValue::One : LogicValue::Zero, s, cfg_);
    }

    // Undriven: Z keeps the previous state (charge retention), and any
    // maybe-on drive that disagrees with it makes the node X.
    const bool p0 = pos[0].any[i], p1 = pos[1].any[i];
    if (!p0 && !p1) {
      if (prev_) return prev_state;
      return NodeState{LogicValue::Floating, Strength::Strong, 0.0};
    }
    if (prev_ && prev_state.driven()) {
      const int pv = prev_state.value == LogicValue::One ? 1 : 0;
      if ((pv == 0 && p1) || (pv == 1 && p0)) return unknown();
      Strength sp = pos[pv].strong[i] ? Strength::Strong : Strength::Degraded;
      Strength s = (sp == Strength::Degraded ||
                    prev_state.strength == Strength::Degraded)
                       ? Strength::Degraded
                       : Strength::Strong;
      return driven_state(prev_state.value, s, cfg_);
    }
    return unknown();
  }

  const Netlist& netlist_;
  const EvalConfig& cfg_;
  const std::vector<NodeState>& pinned_state_;
  const std::vector<char>& pinned_;
  const std::vector<NodeState>* prev_;
};

} // namespace

char logic_value_char(LogicValue v) {
  switch (v) {
    case LogicValue::Zero: return '0';
    case LogicValue::One: return '1';
    case LogicValue::Unknown: return 'X';
    case LogicValue::Floating: return 'Z';
  }
  return '?';
}

SwitchState switch_state(const Device& device, const NodeState& gate_state) {
  switch (gate_state.value) {
    case LogicValue::One:
      return device.kind == DeviceKind::NMos ? SwitchState::On : SwitchState::Off;
    case LogicValue::Zero:
      return device.kind == DeviceKind::PMos ? SwitchState::On : SwitchState::Off;
    case LogicValue::Unknown:
    case LogicValue::Floating:
      return SwitchState::MaybeOn;
  }
  return SwitchState::MaybeOn;
}

bool switch_is_on(const Device& device, const NodeState& gate_state) {
  return switch_state(device, gate_state) == SwitchState::On;
}

EvalResult evaluate(const Netlist& netlist, std::span<const LogicValue> inputs,
                    const EvalConfig& cfg, const std::vector<NodeState>* prev) {
  const std::size_t n = netlist.node_count();
  if (!(cfg.vdd > 0.0) || !(cfg.vtn > 0.0 && cfg.vtn < cfg.vdd) ||
      !(std::abs(cfg.vtp) > 0.0 && std::abs(cfg.vtp) < cfg.vdd))
    throw SimError(ErrorKind::InvalidValue,
                   "thresholds must satisfy 0 < vtn, |vtp| < vdd");
  if (inputs.size() != netlist.inputs().size())
    throw SimError(ErrorKind::MissingInput,
                   "expected " + std::to_string(netlist.inputs().size()) +
                   " input values, got " + std::to_string(inputs.size()));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i] != LogicValue::Zero && inputs[i] != LogicValue::One)
      throw SimError(ErrorKind::MissingInput,
                     "input '" +
                     netlist.node(netlist.inputs()[i]).name +
                     "' must be 0 or 1");
  }
  if (prev && prev->size() != n)
    throw SimError(ErrorKind::InvalidValue,
                   "previous state must cover every node");

  std::vector<char> pinned(n, 0);
  std::vector<NodeState> pinned_state(n);
  auto pin = [&](NodeId id, LogicValue v) {
    pinned[id.index] = 1;
    pinned_state[id.index] =
        NodeState{v, Strength::Strong, v == LogicValue::One ? cfg.vdd : 0.0};
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    const Node& node = netlist.node(NodeId(i));
    switch (node.role) {
      case NodeRole::SupplyRail: pin(NodeId(i), LogicValue::One); break;
      case NodeRole::GroundRail: pin(NodeId(i), LogicValue::Zero); break;
      case NodeRole::PowerClock:
        pin(NodeId(i), clock_high(cfg.clock_phase) ? LogicValue::One
                                                   : LogicValue::Zero);
        break;
      default: break;
    }
  }
  for (std::size_t i = 0; i < inputs.size(); ++i)
    pin(netlist.inputs()[i], inputs[i]);

  const int max_iterations = cfg.max_iterations > 0
                                 ? cfg.max_iterations
                                 : 4 * static_cast<int>(n);

  FixedPoint fp(netlist, cfg, pinned_state, pinned, prev);
  if (netlist.has_power_clock() && cfg.clock_phase == ClockPhase::Evaluate) {
    // A rising power clock feeds the NMOS function blocks before its level
    // can source PMOS conduction; settling the n-paths first is what lets
    // cross-coupled latches snap to the function-block side.
    EvalResult stage = fp.run(true, max_iterations);
    FixedPoint full(netlist, cfg, pinned_state, pinned, &stage.states);
    EvalResult result = full.run(false, max_iterations);
    result.iterations += stage.iterations;
    return result;
  }
  return fp.run(false, max_iterations);
}

std::vector<NodeState> discharged_state(const Netlist& netlist) {
  return std::vector<NodeState>(netlist.node_count(),
                                NodeState{LogicValue::Zero, Strength::Strong, 0.0});
}

CycleStates settle_cycle(const Netlist& netlist, std::span<const LogicValue> inputs,
                         const EvalConfig& cfg,
                         const std::vector<NodeState>* prev) {
  if (!netlist.has_power_clock()) {
    EvalResult res = evaluate(netlist, inputs, cfg, prev);
    return CycleStates{res, res};
  }
  std::vector<NodeState> cold;
  if (!prev) {
    cold = discharged_state(netlist);
    prev = &cold;
  }
  EvalConfig phase_cfg = cfg;
  phase_cfg.clock_phase = ClockPhase::Evaluate;
  EvalResult ev = evaluate(netlist, inputs, phase_cfg, prev);
  phase_cfg.clock_phase = ClockPhase::Hold;
  EvalResult hold = evaluate(netlist, inputs, phase_cfg, &ev.states);
  phase_cfg.clock_phase = ClockPhase::Recover;
  EvalResult recover = evaluate(netlist, inputs, phase_cfg, &hold.states);
  phase_cfg.clock_phase = ClockPhase::Wait;
  EvalResult wait = evaluate(netlist, inputs, phase_cfg, &recover.states);
  return CycleStates{std::move(hold), std::move(wait)};
}

InputPairing pair_inputs(const Netlist& netlist) {
  InputPairing pairing;
  const auto& inputs = netlist.inputs();
  auto find_input = [&](std::string_view name) -> std::optional<std::uint32_t> {
    for (std::uint32_t i = 0; i < inputs.size(); ++i) {
      const std::string& candidate = netlist.node(inputs[i]).name;
      if (candidate.size() == name.size() &&
          std::equal(candidate.begin(), candidate.end(), name.begin(),
                     [](char a, char b) {
                       return std::tolower(static_cast<unsigned char>(a)) ==
                              std::tolower(static_cast<unsigned char>(b));
                     }))
        return i;
    }
    return std::nullopt;
  };

  std::vector<std::optional<std::uint32_t>> base(inputs.size());
  for (std::uint32_t i = 0; i < inputs.size(); ++i) {
    const std::string& name = netlist.node(inputs[i]).name;
    if (name.size() > 1 && (name[0] == 'n' || name[0] == 'N')) {
      if (auto b = find_input(std::string_view(name).substr(1)); b && *b != i)
        base[i] = *b;
    }
  }
  std::vector<std::uint32_t> primary_pos(inputs.size(), NodeId::npos);
  for (std::uint32_t i = 0; i < inputs.size(); ++i) {
    if (!base[i]) {
      primary_pos[i] = static_cast<std::uint32_t>(pairing.primary.size());
      pairing.primary.push_back(i);
    }
  }
  for (std::uint32_t i = 0; i < inputs.size(); ++i) {
    if (base[i]) pairing.complements.push_back({i, primary_pos[*base[i]]});
  }
  return pairing;
}

std::vector<LogicValue> expand_inputs(const InputPairing& pairing,
                                      std::size_t input_count,
                                      std::span<const LogicValue> primary_values) {
  std::vector<LogicValue> full(input_count, LogicValue::Zero);
  for (std::size_t j = 0; j < pairing.primary.size(); ++j)
    full[pairing.primary[j]] = primary_values[j];
  for (auto [pin, primary] : pairing.complements)
    full[pin] = primary_values[primary] == LogicValue::One ? LogicValue::Zero
                                                           : LogicValue::One;
  return full;
}

TruthTable truth_table(const Netlist& netlist, const EvalConfig& cfg, bool warm) {
  InputPairing pairing = pair_inputs(netlist);
  const std::size_t k = pairing.primary.size();
  if (k > 16)
    throw SimError(ErrorKind::InvalidValue,
                   "truth table limited to 16 primary inputs, netlist has " +
                   std::to_string(k));

  TruthTable table;
  for (std::uint32_t pos : pairing.primary)
    table.input_names.push_back(netlist.node(netlist.inputs()[pos]).name);
  for (NodeId id : netlist.outputs())
    table.output_names.push_back(netlist.node(id).name);

  const bool clocked = netlist.has_power_clock();
  std::vector<NodeState> carry_state;
  bool have_carry = false;

  const std::size_t row_count = std::size_t{1} << k;
  for (std::size_t row = 0; row < row_count; ++row) {
    std::vector<LogicValue> primaries(k);
    for (std::size_t j = 0; j < k; ++j)
      primaries[j] = (row >> (k - 1 - j)) & 1 ? LogicValue::One : LogicValue::Zero;
    std::vector<LogicValue> full =
        expand_inputs(pairing, netlist.inputs().size(), primaries);

    const std::vector<NodeState>* prev = nullptr;
    if (warm && have_carry) prev = &carry_state;

    CycleStates cycle;
    try {
      cycle = settle_cycle(netlist, full, cfg, prev);
    } catch (const SimError& e) {
      std::ostringstream row_desc;
      for (std::size_t j = 0; j < k; ++j) {
        if (j) row_desc << ",";
        row_desc << table.input_names[j] << "="
                 << logic_value_char(primaries[j]);
      }
      throw SimError(e.kind(), std::string(e.what()) +
                     " (truth-table row " + row_desc.str() + ")");
    }

    std::vector<NodeState> outs;
    outs.reserve(netlist.outputs().size());
    for (NodeId id : netlist.outputs()) outs.push_back(cycle.hold[id]);
    table.rows.push_back(std::move(outs));

    if (warm) {
      carry_state = clocked ? cycle.wait.states : cycle.hold.states;
      have_carry = true;
    }
  }
  return table;
}

std::string TruthTable::to_csv() const {
  std::ostringstream out;
  bool first = true;
  for (const std::string& name : input_names) {
    if (!first) out << ",";
    out << name;
    first = false;
  }
  for (const std::string& name : output_names) out << "," << name;
  out << "\n";

  const std::size_t k = input_names.size();
  for (std::size_t row = 0; row < rows.size(); ++row) {
    for (std::size_t j = 0; j < k; ++j) {
      if (j) out << ",";
      out << (((row >> (k - 1 - j)) & 1) ? '1' : '0');
    }
    for (const NodeState& s : rows[row]) {
      out << "," << logic_value_char(s.value);
      if (s.driven() && s.strength == Strength::Degraded) out << "d";
    }
    out << "\n";
  }
  return out.str();
}

} // namespace adiasim
