#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adiasim/netlist.hpp"
#include "adiasim/switch_eval.hpp"

namespace adiasim {

struct ConductanceEdge {
  std::uint32_t a;
  std::uint32_t b;
  double conductance; // siemens, > 0
};

/// Two-terminal resistive network extracted from the conducting switches.
struct ConductanceNetwork {
  std::uint32_t node_count = 0;
  std::vector<ConductanceEdge> edges;
  std::uint32_t terminal_a = 0;
  std::uint32_t terminal_b = 0;
};

/// Collects every definitely-on device (see switch_state) as an edge of
/// conductance 1/R between its channel terminals. Maybe-on devices are left
/// out, so the resulting resistance errs high. Terminals are the charging
/// rail and the node being charged.
ConductanceNetwork from_on_switches(const Netlist& netlist,
                                    std::span<const NodeState> states,
                                    NodeId rail, NodeId target);

/// Effective resistance between the two terminals by a dense nodal solve:
/// unit current in at terminal_a, out at terminal_b, grounded at terminal_b.
/// Returns +infinity when the terminals are not connected. Throws
/// SingularSystem if elimination hits a pivot below 1e-15 x the largest
/// conductance (cannot happen for positive conductances on a connected
/// component; the guard is defensive).
double effective_resistance(const ConductanceNetwork& network);

} // namespace adiasim
