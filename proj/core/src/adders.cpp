#include "adiasim/adders.hpp"

#include <algorithm>
#include <cctype>

namespace adiasim {

namespace {

constexpr double kLoadCap = 20e-15;

// Builder shorthand shared by the topology constructors.
struct Circuit {
  Netlist net;

  explicit Circuit(std::string name) : net(std::move(name)) {}

  NodeId node(std::string name, double cap = 0.0,
              NodeRole role = NodeRole::Internal) {
    return net.add_node(std::move(name), cap, role);
  }
  NodeId input(std::string name) {
    NodeId id = net.add_node(std::move(name));
    net.add_input(id);
    return id;
  }
  NodeId output(std::string name, double cap = kLoadCap) {
    NodeId id = net.add_node(std::move(name), cap);
    net.add_output(id);
    return id;
  }
  void n(std::string name, NodeId gate, NodeId source, NodeId drain) {
    net.add_device(std::move(name), DeviceKind::NMos, gate, source, drain);
  }
  void p(std::string name, NodeId gate, NodeId source, NodeId drain) {
    net.add_device(std::move(name), DeviceKind::PMos, gate, source, drain);
  }
  void inverter(const std::string& tag, NodeId in, NodeId out, NodeId vdd,
                NodeId gnd) {
    p("mp" + tag, in, vdd, out);
    n("mn" + tag, in, gnd, out);
  }
  // Transmission gate: both halves conduct together under complementary
  // controls, halving the path resistance.
  void tgate(const std::string& tag, NodeId ctrl, NodeId ctrl_n, NodeId from,
             NodeId to) {
    n("mtn" + tag, ctrl, from, to);
    p("mtp" + tag, ctrl_n, from, to);
  }
};

// Mirror-style complementary CMOS adder: a 10T majority gate for the carry
// complement, a 14T gate for the sum complement reusing it, and two output
// inverters.
Netlist build_cmos28() {
  Circuit c("cmos28");
  NodeId vdd = c.node("VDD", 0.0, NodeRole::SupplyRail);
  NodeId gnd = c.node("GND", 0.0, NodeRole::GroundRail);
  NodeId a = c.input("A"), b = c.input("B"), ci = c.input("C");
  NodeId sum = c.output("Sum"), carry = c.output("Carry");
  NodeId cb = c.node("cb"); // carry complement
  NodeId sb = c.node("sb"); // sum complement
  NodeId x1 = c.node("x1"), x2 = c.node("x2");
  NodeId y1 = c.node("y1"), y2 = c.node("y2");
  NodeId s1 = c.node("s1"), s2 = c.node("s2"), s3 = c.node("s3");
  NodeId t1 = c.node("t1"), t2 = c.node("t2"), t3 = c.node("t3");

  // carry pull-down: AB + C(A + B)
  c.n("mn1", a, x1, cb);
  c.n("mn2", b, gnd, x1);
  c.n("mn3", ci, x2, cb);
  c.n("mn4", a, gnd, x2);
  c.n("mn5", b, gnd, x2);
  // carry pull-up mirror
  c.p("mp1", a, y1, cb);
  c.p("mp2", b, vdd, y1);
  c.p("mp3", ci, y2, cb);
  c.p("mp4", a, vdd, y2);
  c.p("mp5", b, vdd, y2);
  // sum pull-down: ABC + cb(A + B + C)
  c.n("mn6", a, s1, sb);
  c.n("mn7", b, s2, s1);
  c.n("mn8", ci, gnd, s2);
  c.n("mn9", cb, s3, sb);
  c.n("mn10", a, gnd, s3);
  c.n("mn11", b, gnd, s3);
  c.n("mn12", ci, gnd, s3);
  // sum pull-up mirror
  c.p("mp6", a, t1, sb);
  c.p("mp7", b, t2, t1);
  c.p("mp8", ci, vdd, t2);
  c.p("mp9", cb, t3, sb);
  c.p("mp10", a, vdd, t3);
  c.p("mp11", b, vdd, t3);
  c.p("mp12", ci, vdd, t3);
  // output inverters
  c.inverter("13", cb, carry, vdd, gnd);
  c.inverter("14", sb, sum, vdd, gnd);
  return std::move(c.net);
}

// CPL: dual-rail nMOS pass networks (14T) restored by four output inverters.
// The optional pMOS pair cross-couples the internal XOR rails to pull the
// degraded level back to the rail.
Netlist build_cpl(bool optional_pmos) {
  Circuit c("cpl");
  NodeId vdd = c.node("VDD", 0.0, NodeRole::SupplyRail);
  NodeId gnd = c.node("GND", 0.0, NodeRole::GroundRail);
  NodeId a = c.input("A"), b = c.input("B"), ci = c.input("C");
  NodeId na = c.input("nA"), nb = c.input("nB"), nc = c.input("nC");
  NodeId sum = c.output("Sum"), carry = c.output("Carry");
  NodeId nsum = c.output("nSum"), ncarry = c.output("nCarry");
  NodeId x = c.node("x"), xb = c.node("xb");
  NodeId si = c.node("si"), sbi = c.node("sbi");
  NodeId cyi = c.node("cyi"), cbi = c.node("cbi");

  // x = A xor B, xb its complement
  c.n("mn1", nb, a, x);
  c.n("mn2", b, na, x);
  c.n("mn3", b, a, xb);
  c.n("mn4", nb, na, xb);
  // sum rails: si = x xor C
  c.n("mn5", nc, x, si);
  c.n("mn6", ci, xb, si);
  c.n("mn7", nc, xb, sbi);
  c.n("mn8", ci, x, sbi);
  // carry rails: majority via the shared xor term, with the redundant
  // B branch closing the A=B case from both sides
  c.n("mn9", x, ci, cyi);
  c.n("mn10", xb, a, cyi);
  c.n("mn11", xb, b, cyi);
  c.n("mn12", x, nc, cbi);
  c.n("mn13", xb, na, cbi);
  c.n("mn14", xb, nb, cbi);
  // swing-restoring output inverters
  c.inverter("v1", sbi, sum, vdd, gnd);
  c.inverter("v2", si, nsum, vdd, gnd);
  c.inverter("v3", cbi, carry, vdd, gnd);
  c.inverter("v4", cyi, ncarry, vdd, gnd);
  if (optional_pmos) {
    c.p("mpo1", xb, vdd, x);
    c.p("mpo2", x, vdd, xb);
  }
  return std::move(c.net);
}

// Transmission-gate adder: XOR by TG mux, sum and carry by TG muxes steered
// with the XOR rails.
Netlist build_tgate() {
  Circuit c("tgate");
  NodeId vdd = c.node("VDD", 0.0, NodeRole::SupplyRail);
  NodeId gnd = c.node("GND", 0.0, NodeRole::GroundRail);
  NodeId a = c.input("A"), b = c.input("B"), ci = c.input("C");
  NodeId sum = c.output("Sum"), carry = c.output("Carry");
  NodeId an = c.node("an"), bn = c.node("bn"), cn = c.node("cn");
  NodeId x = c.node("x"), xn = c.node("xn");

  c.inverter("1", a, an, vdd, gnd);
  c.inverter("2", b, bn, vdd, gnd);
  c.inverter("3", ci, cn, vdd, gnd);
  c.tgate("1", bn, b, a, x);  // B=0: x = A
  c.tgate("2", b, bn, an, x); // B=1: x = ~A
  c.inverter("4", x, xn, vdd, gnd);
  c.tgate("3", ci, cn, xn, sum); // C=1: sum = ~x
  c.tgate("4", cn, ci, x, sum);  // C=0: sum = x
  c.tgate("5", x, xn, ci, carry); // x=1: carry = C
  c.tgate("6", xn, x, a, carry);  // x=0: carry = A
  return std::move(c.net);
}

// PAL: all-nMOS pass-network adder. A clock-sourced tree generates the
// select rails x = clk&(A^B) and xb = clk&~(A^B), sharing its first level
// between them; the select rails then steer single-device muxes that pass
// the C/~C/B rails to the outputs, so the common xor term serves sum and
// carry at once. The select rails recover to a strong zero with the clock,
// and the outputs hold their level through recover/wait.
Netlist build_pal() {
  Circuit c("pal");
  NodeId pclk = c.node("PCLK", 0.0, NodeRole::PowerClock);
  c.node("GND", 0.0, NodeRole::GroundRail);
  NodeId a = c.input("A"), b = c.input("B"), ci = c.input("C");
  NodeId na = c.input("nA"), nb = c.input("nB"), nc = c.input("nC");
  NodeId sum = c.output("Sum"), carry = c.output("Carry");
  NodeId q1 = c.node("q1"), q0 = c.node("q0");
  NodeId x = c.node("x"), xb = c.node("xb");

  c.n("mn1", a, pclk, q1);
  c.n("mn2", na, pclk, q0);
  c.n("mn3", nb, q1, x);
  c.n("mn4", b, q0, x);
  c.n("mn5", b, q1, xb);
  c.n("mn6", nb, q0, xb);
  c.n("mn7", x, nc, sum);   // A^B:   Sum = ~C
  c.n("mn8", xb, ci, sum);  // A==B:  Sum = C
  c.n("mn9", x, ci, carry); // A^B:   Carry = C
  c.n("mn10", xb, b, carry); // A==B: Carry = B
  return std::move(c.net);
}

// PFAL gate pair: nMOS function trees between the power clock and the rails,
// held by a cross-coupled inverter latch. The sum gate uses the four-minterm
// parity trees; the carry gate uses factored majority trees.
Netlist build_pfal() {
  Circuit c("pfal");
  NodeId pclk = c.node("PCLK", 0.0, NodeRole::PowerClock);
  NodeId gnd = c.node("GND", 0.0, NodeRole::GroundRail);
  NodeId a = c.input("A"), b = c.input("B"), ci = c.input("C");
  NodeId na = c.input("nA"), nb = c.input("nB"), nc = c.input("nC");
  NodeId sum = c.output("Sum"), carry = c.output("Carry");
  NodeId nsum = c.output("nSum"), ncarry = c.output("nCarry");

  // sum gate, F = A xor B xor C
  NodeId fu1 = c.node("fu1"), fu0 = c.node("fu0");
  NodeId fu11 = c.node("fu11"), fu10 = c.node("fu10");
  NodeId fu01 = c.node("fu01"), fu00 = c.node("fu00");
  c.n("ms1", a, pclk, fu1);
  c.n("ms2", na, pclk, fu0);
  c.n("ms3", b, fu1, fu11);
  c.n("ms4", nb, fu1, fu10);
  c.n("ms5", b, fu0, fu01);
  c.n("ms6", nb, fu0, fu00);
  c.n("ms7", ci, fu11, sum);
  c.n("ms8", nc, fu10, sum);
  c.n("ms9", nc, fu01, sum);
  c.n("ms10", ci, fu00, sum);
  // sum gate, complement tree
  NodeId gu1 = c.node("gu1"), gu0 = c.node("gu0");
  NodeId gu11 = c.node("gu11"), gu10 = c.node("gu10");
  NodeId gu01 = c.node("gu01"), gu00 = c.node("gu00");
  c.n("ms11", a, pclk, gu1);
  c.n("ms12", na, pclk, gu0);
  c.n("ms13", b, gu1, gu11);
  c.n("ms14", nb, gu1, gu10);
  c.n("ms15", b, gu0, gu01);
  c.n("ms16", nb, gu0, gu00);
  c.n("ms17", nc, gu11, nsum);
  c.n("ms18", ci, gu10, nsum);
  c.n("ms19", ci, gu01, nsum);
  c.n("ms20", nc, gu00, nsum);
  // sum latch
  c.p("mps1", nsum, pclk, sum);
  c.p("mps2", sum, pclk, nsum);
  c.n("mns1", nsum, gnd, sum);
  c.n("mns2", sum, gnd, nsum);

  // carry gate, F = AB + C(A + B)
  NodeId cv1 = c.node("cv1"), cv2 = c.node("cv2");
  c.n("mc1", a, pclk, cv1);
  c.n("mc2", b, cv1, carry);
  c.n("mc3", ci, pclk, cv2);
  c.n("mc4", a, cv2, carry);
  c.n("mc5", b, cv2, carry);
  NodeId cv3 = c.node("cv3"), cv4 = c.node("cv4");
  c.n("mc6", na, pclk, cv3);
  c.n("mc7", nb, cv3, ncarry);
  c.n("mc8", nc, pclk, cv4);
  c.n("mc9", na, cv4, ncarry);
  c.n("mc10", nb, cv4, ncarry);
  // carry latch
  c.p("mpc1", ncarry, pclk, carry);
  c.p("mpc2", carry, pclk, ncarry);
  c.n("mnc1", ncarry, gnd, carry);
  c.n("mnc2", carry, gnd, ncarry);
  return std::move(c.net);
}

// TGAL: the PFAL skeleton with transmission-gate function blocks. The sum
// gate is a shared three-level TG parity tree (14 TGs), the carry gate three
// unfactored majority branches per rail (12 TGs); with the two latches the
// split is 32 + 28 devices. The shared parity fabric is wide enough that its
// tree nodes carry declared wiring load; they stay driven through the output
// latch in every hold state, unlike the carry branch heads, which can float.
Netlist build_tgal() {
  Circuit c("tgal");
  NodeId pclk = c.node("PCLK", 0.0, NodeRole::PowerClock);
  NodeId gnd = c.node("GND", 0.0, NodeRole::GroundRail);
  NodeId a = c.input("A"), b = c.input("B"), ci = c.input("C");
  NodeId na = c.input("nA"), nb = c.input("nB"), nc = c.input("nC");
  NodeId sum = c.output("Sum"), carry = c.output("Carry");
  NodeId nsum = c.output("nSum"), ncarry = c.output("nCarry");

  constexpr double kTreeCap = 20e-15;
  NodeId tu1 = c.node("tu1", kTreeCap), tu0 = c.node("tu0", kTreeCap);
  NodeId tu11 = c.node("tu11", kTreeCap), tu10 = c.node("tu10", kTreeCap);
  NodeId tu01 = c.node("tu01", kTreeCap), tu00 = c.node("tu00", kTreeCap);
  c.tgate("s1", a, na, pclk, tu1);
  c.tgate("s2", na, a, pclk, tu0);
  c.tgate("s3", b, nb, tu1, tu11);
  c.tgate("s4", nb, b, tu1, tu10);
  c.tgate("s5", b, nb, tu0, tu01);
  c.tgate("s6", nb, b, tu0, tu00);
  c.tgate("s7", ci, nc, tu11, sum);
  c.tgate("s8", nc, ci, tu10, sum);
  c.tgate("s9", nc, ci, tu01, sum);
  c.tgate("s10", ci, nc, tu00, sum);
  c.tgate("s11", nc, ci, tu11, nsum);
  c.tgate("s12", ci, nc, tu10, nsum);
  c.tgate("s13", ci, nc, tu01, nsum);
  c.tgate("s14", nc, ci, tu00, nsum);
  c.p("mps1", nsum, pclk, sum);
  c.p("mps2", sum, pclk, nsum);
  c.n("mns1", nsum, gnd, sum);
  c.n("mns2", sum, gnd, nsum);

  NodeId tw1 = c.node("tw1"), tw2 = c.node("tw2");
  NodeId tw3 = c.node("tw3"), tw4 = c.node("tw4");
  NodeId tw5 = c.node("tw5"), tw6 = c.node("tw6");
  c.tgate("c1", a, na, pclk, tw1);
  c.tgate("c2", b, nb, tw1, carry);
  c.tgate("c3", b, nb, pclk, tw2);
  c.tgate("c4", ci, nc, tw2, carry);
  c.tgate("c5", ci, nc, pclk, tw3);
  c.tgate("c6", a, na, tw3, carry);
  c.tgate("c7", na, a, pclk, tw4);
  c.tgate("c8", nb, b, tw4, ncarry);
  c.tgate("c9", nb, b, pclk, tw5);
  c.tgate("c10", nc, ci, tw5, ncarry);
  c.tgate("c11", nc, ci, pclk, tw6);
  c.tgate("c12", na, a, tw6, ncarry);
  c.p("mpc1", ncarry, pclk, carry);
  c.p("mpc2", carry, pclk, ncarry);
  c.n("mnc1", ncarry, gnd, carry);
  c.n("mnc2", carry, gnd, ncarry);
  return std::move(c.net);
}

// SERF 10T: inverter on A, powerless XNOR/XOR pass cells, and the two output
// muxes steered by the XOR rail.
Netlist build_serf() {
  Circuit c("serf");
  NodeId vdd = c.node("VDD", 0.0, NodeRole::SupplyRail);
  NodeId gnd = c.node("GND", 0.0, NodeRole::GroundRail);
  NodeId a = c.input("A"), b = c.input("B"), ci = c.input("C");
  NodeId sum = c.output("Sum"), carry = c.output("Carry");
  NodeId an = c.node("an"), h = c.node("h"), x = c.node("x");

  c.inverter("1", a, an, vdd, gnd);
  c.n("mn2", b, a, h);  // B=1: h = A
  c.p("mp2", b, an, h); // B=0: h = ~A   -> h = xnor(A, B)
  c.n("mn3", b, an, x); // B=1: x = ~A
  c.p("mp3", b, a, x);  // B=0: x = A    -> x = xor(A, B)
  c.n("mn4", ci, h, sum); // C=1: sum = xnor(A,B)
  c.p("mp4", ci, x, sum); // C=0: sum = xor(A,B)
  c.n("mn5", x, ci, carry); // A^B: carry = C
  c.p("mp5", x, a, carry);  // A=B: carry = A
  return std::move(c.net);
}

} // namespace

const char* adder_kind_name(AdderKind kind) {
  switch (kind) {
    case AdderKind::Cmos28: return "cmos28";
    case AdderKind::Cpl: return "cpl";
    case AdderKind::TGate: return "tgate";
    case AdderKind::PassAdiabatic: return "pal";
    case AdderKind::Pfal: return "pfal";
    case AdderKind::Tgal: return "tgal";
    case AdderKind::Serf: return "serf";
  }
  return "?";
}

std::optional<AdderKind> parse_adder_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  for (AdderKind kind : kAllAdderKinds)
    if (lower == adder_kind_name(kind)) return kind;
  return std::nullopt;
}

AdderSpec build(AdderKind kind, bool cpl_optional_pmos) {
  AdderSpec spec;
  spec.kind = kind;
  spec.cpl_optional_pmos = kind == AdderKind::Cpl && cpl_optional_pmos;
  switch (kind) {
    case AdderKind::Cmos28:
      spec.netlist = build_cmos28();
      spec.expected_devices = 28;
      spec.supply_regime = SupplyRegime::Dc;
      break;
    case AdderKind::Cpl:
      spec.netlist = build_cpl(spec.cpl_optional_pmos);
      spec.expected_devices = spec.cpl_optional_pmos ? 24 : 22;
      spec.supply_regime = SupplyRegime::Dc;
      break;
    case AdderKind::TGate:
      spec.netlist = build_tgate();
      spec.expected_devices = 20;
      spec.supply_regime = SupplyRegime::Dc;
      break;
    case AdderKind::PassAdiabatic:
      spec.netlist = build_pal();
      spec.expected_devices = 10;
      spec.supply_regime = SupplyRegime::PowerClock;
      break;
    case AdderKind::Pfal:
      spec.netlist = build_pfal();
      spec.expected_devices = 38;
      spec.supply_regime = SupplyRegime::PowerClock;
      break;
    case AdderKind::Tgal:
      spec.netlist = build_tgal();
      spec.expected_devices = 60;
      spec.supply_regime = SupplyRegime::PowerClock;
      break;
    case AdderKind::Serf:
      spec.netlist = build_serf();
      spec.expected_devices = 10;
      spec.supply_regime = SupplyRegime::Dc;
      break;
  }
  return spec;
}

VerificationReport verify_function(const AdderSpec& spec, const EvalConfig& cfg,
                                   bool warm) {
  VerificationReport report;
  report.kind = spec.kind;

  const Netlist& net = spec.netlist;
  auto find_output = [&](std::string_view name) {
    for (std::size_t i = 0; i < net.outputs().size(); ++i) {
      const std::string& n = net.node(net.outputs()[i]).name;
      if (n.size() == name.size() &&
          std::equal(n.begin(), n.end(), name.begin(), [](char x, char y) {
            return std::tolower(static_cast<unsigned char>(x)) ==
                   std::tolower(static_cast<unsigned char>(y));
          }))
        return i;
    }
    throw SimError(ErrorKind::UnknownNode,
                   "netlist has no output named '" + std::string(name) + "'");
  };
  const std::size_t sum_col = find_output("sum");
  const std::size_t carry_col = find_output("carry");

  TruthTable table = truth_table(net, cfg, warm);
  if (table.input_names.size() != 3)
    throw SimError(ErrorKind::InvalidValue,
                   "adder verification expects 3 primary inputs, found " +
                   std::to_string(table.input_names.size()));

  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    RowCheck check;
    int ones = 0;
    for (int j = 0; j < 3; ++j) {
      bool bit = (row >> (2 - j)) & 1;
      check.inputs[j] = bit ? LogicValue::One : LogicValue::Zero;
      ones += bit;
    }
    check.expected_sum = (ones % 2) ? LogicValue::One : LogicValue::Zero;
    check.expected_carry = (ones >= 2) ? LogicValue::One : LogicValue::Zero;
    check.sum = table.rows[row][sum_col];
    check.carry = table.rows[row][carry_col];
    check.pass = check.sum.value == check.expected_sum &&
                 check.carry.value == check.expected_carry;
    report.rows.push_back(check);
  }
  return report;
}

} // namespace adiasim
