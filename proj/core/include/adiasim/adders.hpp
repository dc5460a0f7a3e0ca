#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adiasim/netlist.hpp"
#include "adiasim/switch_eval.hpp"

namespace adiasim {

enum class AdderKind {
  Cmos28,        // complementary static CMOS mirror adder
  Cpl,           // complementary pass-transistor logic with output inverters
  TGate,         // transmission-gate adder
  PassAdiabatic, // PAL: clock-sourced nMOS pass network
  Pfal,          // positive-feedback adiabatic logic, dual rail
  Tgal,          // transmission-gate adiabatic logic, dual rail
  Serf,          // static energy recovery 10T adder
};

enum class SupplyRegime { Dc, PowerClock };

inline constexpr std::array<AdderKind, 7> kAllAdderKinds = {
    AdderKind::Cmos28, AdderKind::Cpl,  AdderKind::TGate, AdderKind::PassAdiabatic,
    AdderKind::Pfal,   AdderKind::Tgal, AdderKind::Serf};

const char* adder_kind_name(AdderKind kind);
std::optional<AdderKind> parse_adder_kind(std::string_view name);

struct AdderSpec {
  AdderKind kind;
  Netlist netlist;
  int expected_devices = 0;
  SupplyRegime supply_regime = SupplyRegime::Dc;
  bool cpl_optional_pmos = false; // meaningful for Cpl only
};

/// Builds the named one-bit full adder. Inputs are ordered A, B, C (with
/// ideal complement pins nA, nB, nC appended for the dual-rail styles),
/// outputs Sum, Carry first, complements after where the style produces
/// them. Output loads default to 20 fF. The CPL variant grows a cross-coupled
/// pMOS level-restorer pair (22 -> 24 devices) when `cpl_optional_pmos` is
/// set; the flag is ignored for the other kinds.
AdderSpec build(AdderKind kind, bool cpl_optional_pmos = false);

struct RowCheck {
  std::array<LogicValue, 3> inputs; // A, B, C
  LogicValue expected_sum;
  LogicValue expected_carry;
  NodeState sum;
  NodeState carry;
  bool pass = false;
};

struct VerificationReport {
  AdderKind kind;
  std::vector<RowCheck> rows;

  bool all_pass() const {
    for (const RowCheck& r : rows)
      if (!r.pass) return false;
    return !rows.empty();
  }
};

/// Checks Sum = A ^ B ^ C and Carry = majority(A, B, C) over all eight input
/// rows at value level (pass-transistor styles may report Degraded strength).
/// Power-clocked netlists run each row through a full clock cycle; `warm`
/// chains rows through the previous row's end-of-cycle state instead of
/// restarting cold.
VerificationReport verify_function(const AdderSpec& spec, const EvalConfig& cfg,
                                   bool warm = false);

} // namespace adiasim
