#include "adiasim/resistnet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace adiasim {

ConductanceNetwork from_on_switches(const Netlist& netlist,
                                    std::span<const NodeState> states,
                                    NodeId rail, NodeId target) {
  if (rail == target)
    throw SimError(ErrorKind::InvalidValue,
                   "rail and target must be distinct nodes");
  ConductanceNetwork network;
  network.node_count = static_cast<std::uint32_t>(netlist.node_count());
  network.terminal_a = rail.index;
  network.terminal_b = target.index;
  for (const Device& d : netlist.devices()) {
    if (!switch_is_on(d, states[d.gate.index])) continue;
    network.edges.push_back(
        {d.source.index, d.drain.index, 1.0 / d.on_resistance});
  }
  return network;
}

double effective_resistance(const ConductanceNetwork& network) {
  const std::uint32_t a = network.terminal_a;
  const std::uint32_t b = network.terminal_b;
  if (a == b)
    throw SimError(ErrorKind::InvalidValue, "terminals must be distinct");

  // Restrict to the connected component holding terminal_a; a disconnected
  // terminal_b means infinite resistance, and stray components would make the
  // grounded Laplacian singular.
  std::vector<std::uint32_t> component(network.node_count, NodeId::npos);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(network.node_count);
  for (const ConductanceEdge& e : network.edges) {
    if (!(e.conductance > 0.0) || !std::isfinite(e.conductance))
      throw SimError(ErrorKind::InvalidValue,
                     "conductances must be positive and finite");
    if (e.a == e.b) continue; // self-loop carries no current
    adj[e.a].push_back({e.b, e.conductance});
    adj[e.b].push_back({e.a, e.conductance});
  }
  std::vector<std::uint32_t> order;
  std::deque<std::uint32_t> queue{a};
  component[a] = 0;
  order.push_back(a);
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    for (auto [v, g] : adj[u]) {
      (void)g;
      if (component[v] != NodeId::npos) continue;
      component[v] = static_cast<std::uint32_t>(order.size());
      order.push_back(v);
      queue.push_back(v);
    }
  }
  if (component[b] == NodeId::npos)
    return std::numeric_limits<double>::infinity();

  // Grounded Laplacian: drop terminal_b's row/column, inject unit current at
  // terminal_a; the solved potential at terminal_a is the resistance.
  const std::uint32_t m = static_cast<std::uint32_t>(order.size());
  std::vector<std::uint32_t> reduced(m, NodeId::npos);
  std::uint32_t dim = 0;
  for (std::uint32_t i = 0; i < m; ++i)
    if (order[i] != b) reduced[i] = dim++;

  std::vector<double> matrix(static_cast<std::size_t>(dim) * dim, 0.0);
  std::vector<double> rhs(dim, 0.0);
  double max_conductance = 0.0;
  auto at = [&](std::uint32_t r, std::uint32_t c) -> double& {
    return matrix[static_cast<std::size_t>(r) * dim + c];
  };
  for (const ConductanceEdge& e : network.edges) {
    if (e.a == e.b) continue;
    if (component[e.a] == NodeId::npos) continue; // outside the component
    max_conductance = std::max(max_conductance, e.conductance);
    std::uint32_t ra = reduced[component[e.a]];
    std::uint32_t rb = reduced[component[e.b]];
    if (ra != NodeId::npos) at(ra, ra) += e.conductance;
    if (rb != NodeId::npos) at(rb, rb) += e.conductance;
    if (ra != NodeId::npos && rb != NodeId::npos) {
      at(ra, rb) -= e.conductance;
      at(rb, ra) -= e.conductance;
    }
  }
  const std::uint32_t source_row = reduced[component[a]];
  rhs[source_row] = 1.0;

  // Gaussian elimination with partial pivoting.
  const double pivot_floor = 1e-15 * max_conductance;
  for (std::uint32_t col = 0; col < dim; ++col) {
    std::uint32_t pivot = col;
    for (std::uint32_t r = col + 1; r < dim; ++r)
      if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
    if (std::abs(at(pivot, col)) <= pivot_floor)
      throw SimError(ErrorKind::SingularSystem,
                     "pivot below singularity guard during nodal solve");
    if (pivot != col) {
      for (std::uint32_t c = col; c < dim; ++c)
        std::swap(at(pivot, c), at(col, c));
      std::swap(rhs[pivot], rhs[col]);
    }
    const double diag = at(col, col);
    for (std::uint32_t r = col + 1; r < dim; ++r) {
      const double factor = at(r, col) / diag;
      if (factor == 0.0) continue;
      for (std::uint32_t c = col; c < dim; ++c) at(r, c) -= factor * at(col, c);
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> potential(dim, 0.0);
  for (std::uint32_t r = dim; r-- > 0;) {
    double sum = rhs[r];
    for (std::uint32_t c = r + 1; c < dim; ++c) sum -= at(r, c) * potential[c];
    potential[r] = sum / at(r, r);
  }
  return potential[source_row];
}

} // namespace adiasim
