// Regenerates the circuits/ fixture files from the built-in constructors.
// Run from the repo root: build/tools/genfixtures circuits

#include <filesystem>
#include <fstream>
#include <iostream>

#include "adiasim/adders.hpp"

using namespace adiasim;

namespace {

const char* header_note(AdderKind kind) {
  switch (kind) {
    case AdderKind::Cmos28:
      return "* complementary static CMOS mirror adder: 10T carry gate,\n"
             "* 14T sum gate reusing the carry complement, 2 output inverters\n";
    case AdderKind::Cpl:
      return "* complementary pass-transistor logic: dual-rail nMOS networks\n"
             "* (14T) with four swing-restoring output inverters\n";
    case AdderKind::TGate:
      return "* transmission-gate adder: TG XOR stage plus TG sum/carry muxes\n";
    case AdderKind::PassAdiabatic:
      return "* all-nMOS pass-network adder: a clock-sourced tree derives the\n"
             "* xor/xnor select rails shared by the sum and carry output muxes\n";
    case AdderKind::Pfal:
      return "* positive-feedback adiabatic logic: per output a cross-coupled\n"
             "* inverter latch with complementary nMOS function trees\n";
    case AdderKind::Tgal:
      return "* transmission-gate adiabatic logic; device split 32 (sum gate,\n"
             "* shared 14-TG parity tree) + 28 (carry gate, 12 TGs in three\n"
             "* majority branches per rail); tree heads carry wiring load\n";
    case AdderKind::Serf:
      return "* static energy recovery adder: A inverter, powerless XOR/XNOR\n"
             "* pass cells, XOR-steered output muxes\n";
  }
  return "";
}

} // namespace

int main(int argc, char** argv) {
  std::filesystem::path dir = argc > 1 ? argv[1] : "circuits";
  std::filesystem::create_directories(dir);
  for (AdderKind kind : kAllAdderKinds) {
    AdderSpec spec = build(kind);
    std::filesystem::path path =
        dir / (std::string(adder_kind_name(kind)) + ".net");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << path << "\n";
      return 1;
    }
    out << header_note(kind) << serialize_netlist(spec.netlist);
    std::cout << path.string() << ": " << spec.netlist.device_count()
              << " devices\n";
  }
  return 0;
}
