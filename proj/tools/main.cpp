#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "adiasim/adders.hpp"
#include "adiasim/energy.hpp"
#include "adiasim/harness.hpp"
#include "adiasim/netlist.hpp"
#include "adiasim/switch_eval.hpp"

namespace {

using namespace adiasim;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw SimError(ErrorKind::InvalidValue, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ResolvedCircuit {
  AdderSpec spec;
  std::string display_name;
};

// Built-in names resolve to the compiled constructors unless
// ADIASIM_CIRCUITS_DIR points at a directory of <name>.net fixtures;
// anything else is treated as a netlist file path.
ResolvedCircuit resolve_circuit(const std::string& name) {
  if (auto kind = parse_adder_kind(name)) {
    if (const char* dir = std::getenv("ADIASIM_CIRCUITS_DIR")) {
      std::filesystem::path path =
          std::filesystem::path(dir) / (std::string(adder_kind_name(*kind)) + ".net");
      Netlist net = parse_netlist(read_file(path.string()));
      AdderSpec spec = build(*kind);
      spec.netlist = std::move(net);
      return {std::move(spec), name};
    }
    return {build(*kind), name};
  }
  if (!std::filesystem::exists(name))
    throw SimError(ErrorKind::InvalidValue,
                   "'" + name + "' is neither a built-in circuit nor a file");
  Netlist net = parse_netlist(read_file(name));
  AdderSpec spec;
  spec.kind = AdderKind::Cmos28; // placeholder tag; file circuits carry their own name
  spec.expected_devices = static_cast<int>(net.device_count());
  spec.supply_regime =
      net.has_power_clock() ? SupplyRegime::PowerClock : SupplyRegime::Dc;
  spec.netlist = std::move(net);
  return {std::move(spec), name};
}

std::string state_cell(const NodeState& s) {
  std::string out(1, logic_value_char(s.value));
  if (s.driven() && s.strength == Strength::Degraded) out += 'd';
  return out;
}

int cmd_verify(const std::string& circuit, bool csv, bool warm, EvalConfig eval) {
  ResolvedCircuit resolved = resolve_circuit(circuit);
  if (csv) {
    TruthTable table = truth_table(resolved.spec.netlist, eval, warm);
    std::cout << table.to_csv();
    VerificationReport report = verify_function(resolved.spec, eval, warm);
    return report.all_pass() ? kExitOk : kExitVerifyFail;
  }
  VerificationReport report = verify_function(resolved.spec, eval, warm);
  std::cout << "circuit: " << resolved.display_name << " ("
            << resolved.spec.netlist.device_count() << " devices)\n";
  std::cout << "A B C | Sum   Carry | expected | result\n";
  for (const RowCheck& row : report.rows) {
    std::printf("%c %c %c | %-5s %-5s | %c %c      | %s\n",
                logic_value_char(row.inputs[0]), logic_value_char(row.inputs[1]),
                logic_value_char(row.inputs[2]), state_cell(row.sum).c_str(),
                state_cell(row.carry).c_str(), logic_value_char(row.expected_sum),
                logic_value_char(row.expected_carry),
                row.pass ? "PASS" : "FAIL");
  }
  std::cout << (report.all_pass() ? "all rows PASS\n" : "verification FAILED\n");
  return report.all_pass() ? kExitOk : kExitVerifyFail;
}

void apply_cload(Netlist& net, double cload) {
  for (NodeId id : net.outputs()) net.node(id).capacitance = cload;
}

int cmd_power(std::vector<std::string> circuits, bool all, double vdd,
              double cload, double freq, const std::string& meter_name,
              bool csv, bool json) {
  if (!(freq > 0.0))
    throw SimError(ErrorKind::InvalidValue, "--freq must be positive");
  if (!(vdd > 0.0))
    throw SimError(ErrorKind::InvalidValue, "--vdd must be positive");
  if (all) {
    circuits.clear();
    for (AdderKind kind : kAllAdderKinds)
      circuits.push_back(adder_kind_name(kind));
  }
  if (circuits.empty())
    throw SimError(ErrorKind::InvalidValue,
                   "select circuits with --circuit or --all");

  PowerMeterConfig meter;
  if (meter_name == "rc") meter.mode = PowerMeterConfig::Mode::RcMeter;
  else if (meter_name != "exact")
    throw SimError(ErrorKind::InvalidValue, "--meter must be exact or rc");

  HarnessConfig cfg;
  cfg.eval.vdd = vdd;

  struct Row {
    std::string name;
    std::size_t devices;
    bool cpl;
    double power;
    EnergyReport summed;
  };
  std::vector<Row> rows;
  for (const std::string& name : circuits) {
    ResolvedCircuit resolved = resolve_circuit(name);
    apply_cload(resolved.spec.netlist, cload);
    StimulusPlan plan = default_plan(freq);
    std::vector<EnergyReport> cycles = run_plan(resolved.spec, plan, cfg);
    double energy = 0.0;
    EnergyReport summed;
    for (const EnergyReport& r : cycles) {
      energy += r.total;
      summed.total += r.total;
      summed.dynamic += r.dynamic;
      summed.adiabatic_loss += r.adiabatic_loss;
      summed.non_adiabatic_loss += r.non_adiabatic_loss;
      summed.short_circuit += r.short_circuit;
      summed.leakage += r.leakage;
    }
    double power = meter.mode == PowerMeterConfig::Mode::RcMeter
                       ? average_power(resolved.spec, plan, meter, cfg)
                       : energy * freq / static_cast<double>(cycles.size());
    rows.push_back({resolved.display_name, resolved.spec.netlist.device_count(),
                    parse_adder_kind(name) == AdderKind::Cpl, power,
                    std::move(summed)});
    if (json) {
      std::cout << "{\"circuit\": \"" << resolved.display_name
                << "\", \"report\": " << rows.back().summed.to_json(resolved.spec.netlist)
                << "}\n";
    }
  }
  if (json) return kExitOk;

  if (csv) {
    std::cout << "circuit,devices,avg_power_w\n";
    for (const Row& r : rows)
      std::cout << r.name << "," << r.devices << "," << format_sig9(r.power)
                << "\n";
    return kExitOk;
  }
  std::printf("%-8s %-10s %s\n", "circuit", "devices", "avg_power_w");
  bool cpl_note = false;
  for (const Row& r : rows) {
    std::string devices = std::to_string(r.devices);
    if (r.cpl && r.devices == 22) {
      devices += " (24*)";
      cpl_note = true;
    }
    std::printf("%-8s %-10s %s\n", r.name.c_str(), devices.c_str(),
                format_sig9(r.power).c_str());
  }
  if (cpl_note)
    std::cout << "* with the optional pMOS level-restorer pair\n";
  return kExitOk;
}

int cmd_sweep(const std::vector<std::string>& circuits, double fmin, double fmax,
              int points, const std::string& out_path,
              const std::string& meter_name) {
  if (circuits.empty())
    throw SimError(ErrorKind::InvalidValue, "select circuits with --circuit");
  if (!(0.0 < fmin && fmin < fmax))
    throw SimError(ErrorKind::InvalidValue, "need 0 < --fmin < --fmax");
  if (points < 2)
    throw SimError(ErrorKind::InvalidValue, "--points must be at least 2");

  PowerMeterConfig meter;
  if (meter_name == "rc") meter.mode = PowerMeterConfig::Mode::RcMeter;
  else if (meter_name != "exact")
    throw SimError(ErrorKind::InvalidValue, "--meter must be exact or rc");

  HarnessConfig cfg;
  std::vector<SweepResult> results;
  for (const std::string& name : circuits) {
    ResolvedCircuit resolved = resolve_circuit(name);
    results.push_back(frequency_sweep(resolved.spec, fmin, fmax, points,
                                      default_plan(fmin), meter, cfg));
  }
  std::string csv = sweep_csv(results);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
      throw SimError(ErrorKind::InvalidValue, "cannot write '" + out_path + "'");
    out << csv;
    if (!out)
      throw SimError(ErrorKind::InvalidValue, "write failed on '" + out_path + "'");
  }
  return kExitOk;
}

int cmd_lint(const std::string& path) {
  Netlist net = parse_netlist(read_file(path));
  std::vector<Diagnostic> diags = validate(net);
  for (const Diagnostic& d : diags)
    std::cout << diagnostic_code_name(d.code) << " (" << d.element
              << "): " << d.message << "\n";
  if (diags.empty()) {
    std::cout << "clean: " << net.node_count() << " nodes, "
              << net.device_count() << " devices\n";
    return kExitOk;
  }
  return kExitVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"switch-level full-adder simulator with adiabatic energy accounting"};
  app.require_subcommand(1);

  // verify
  std::string verify_circuit;
  bool verify_csv = false, verify_warm = false;
  EvalConfig verify_eval;
  auto* verify = app.add_subcommand("verify", "check an adder truth table");
  verify->add_option("circuit", verify_circuit, "built-in name or netlist path")
      ->required();
  verify->add_flag("--csv", verify_csv, "emit the truth table as CSV");
  verify->add_flag("--warm", verify_warm, "carry state between rows");
  verify->add_option("--vdd", verify_eval.vdd, "supply voltage");
  verify->add_option("--vtn", verify_eval.vtn, "nMOS threshold");
  verify->add_option("--vtp", verify_eval.vtp, "pMOS threshold (negative)");

  // power
  std::vector<std::string> power_circuits;
  bool power_all = false, power_csv = false, power_json = false;
  double power_vdd = 1.8, power_cload = 20e-15, power_freq = 50e6;
  std::string power_meter = "exact";
  auto* power = app.add_subcommand("power", "average power comparison table");
  power->add_option("--circuit", power_circuits, "circuit (repeatable)");
  power->add_flag("--all", power_all, "all seven built-in adders");
  power->add_option("--vdd", power_vdd, "supply voltage");
  power->add_option("--cload", power_cload, "output load capacitance (F)");
  power->add_option("--freq", power_freq, "clock frequency (Hz)");
  power->add_option("--meter", power_meter, "exact | rc");
  power->add_flag("--csv", power_csv, "CSV output");
  power->add_flag("--json", power_json, "per-circuit energy report as JSON");

  // sweep
  std::vector<std::string> sweep_circuits;
  double sweep_fmin = 1e6, sweep_fmax = 100e6;
  int sweep_points = 20;
  std::string sweep_out, sweep_meter = "exact";
  auto* sweep = app.add_subcommand("sweep", "power vs frequency CSV");
  sweep->add_option("--circuit", sweep_circuits, "circuit (repeatable)")
      ->required();
  sweep->add_option("--fmin", sweep_fmin, "lowest frequency (Hz)");
  sweep->add_option("--fmax", sweep_fmax, "highest frequency (Hz)");
  sweep->add_option("--points", sweep_points, "log-spaced point count");
  sweep->add_option("--out", sweep_out, "output file (stdout when omitted)");
  sweep->add_option("--meter", sweep_meter, "exact | rc");

  // energy calculators
  auto* energy = app.add_subcommand("energy", "charging-formula calculators");
  energy->require_subcommand(1);
  double e_is = 0, e_c = 0, e_t = 0, e_r = 0, e_v = 0;
  int e_n = 1;
  auto* eq2 = energy->add_subcommand("eq2", "capacitor voltage I_S*t/C");
  eq2->add_option("--is", e_is)->required();
  eq2->add_option("--c", e_c)->required();
  eq2->add_option("--t", e_t)->required();
  auto* eq4 = energy->add_subcommand("eq4", "constant-current loss R*I_S^2*T");
  eq4->add_option("--r", e_r)->required();
  eq4->add_option("--is", e_is)->required();
  eq4->add_option("--t", e_t)->required();
  auto* eq5 = energy->add_subcommand("eq5", "ramp loss (RC/T)*C*V^2");
  eq5->add_option("--r", e_r)->required();
  eq5->add_option("--c", e_c)->required();
  eq5->add_option("--t", e_t)->required();
  eq5->add_option("--v", e_v)->required();
  auto* eq6 = energy->add_subcommand("eq6", "stepwise charging loss C*V^2/(2n)");
  eq6->add_option("--c", e_c)->required();
  eq6->add_option("--v", e_v)->required();
  eq6->add_option("--n", e_n)->required();

  // lint
  std::string lint_path;
  auto* lint = app.add_subcommand("lint", "validate a netlist file");
  lint->add_option("netlist", lint_path, "netlist path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e); // prints the message
    return kExitUsage;
  }

  try {
    if (*verify)
      return cmd_verify(verify_circuit, verify_csv, verify_warm, verify_eval);
    if (*power)
      return cmd_power(power_circuits, power_all, power_vdd, power_cload,
                       power_freq, power_meter, power_csv, power_json);
    if (*sweep)
      return cmd_sweep(sweep_circuits, sweep_fmin, sweep_fmax, sweep_points,
                       sweep_out, sweep_meter);
    if (*energy) {
      double value = 0.0;
      if (*eq2) {
        if (!(e_is > 0) || !(e_t >= 0))
          throw SimError(ErrorKind::InvalidValue, "eq2 needs --is > 0, --t >= 0");
        value = cc_voltage(e_is, e_c, e_t);
      } else if (*eq4) {
        if (!(e_r > 0) || !(e_is > 0) || !(e_t >= 0))
          throw SimError(ErrorKind::InvalidValue, "eq4 needs positive parameters");
        value = cc_dissipation(e_r, e_is, e_t);
      } else if (*eq5) {
        if (!(e_r > 0) || !(e_c > 0) || !(e_v > 0))
          throw SimError(ErrorKind::InvalidValue, "eq5 needs positive parameters");
        value = ramp_dissipation(e_r, e_c, e_t, e_v);
      } else if (*eq6) {
        if (!(e_c > 0) || !(e_v > 0))
          throw SimError(ErrorKind::InvalidValue, "eq6 needs positive parameters");
        value = stepwise_dissipation(e_c, e_v, e_n);
      }
      std::cout << format_sig9(value) << "\n";
      return kExitOk;
    }
    if (*lint) return cmd_lint(lint_path);
  } catch (const SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
