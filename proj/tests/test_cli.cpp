#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "adiasim/harness.hpp"

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(ADIASIM_CLI_PATH) + " " + args +
                    (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, n);
  int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

std::string write_temp(const std::string& name, const std::string& body) {
  std::ofstream out(name, std::ios::binary);
  out << body;
  return name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

TEST_CASE("verify: built-in adder passes with exit 0") {
  CliResult r = run_cli("verify cmos28");
  CHECK(r.status == 0);
  CHECK(r.out.find("all rows PASS") != std::string::npos);
  CHECK(count_lines(r.out) == 11); // title + header + 8 rows + summary
}

TEST_CASE("verify --csv emits the truth-table format") {
  CliResult r = run_cli("verify serf --csv");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("A,B,C,Sum,Carry\n", 0) == 0);
  CHECK(r.out.find("\n0,0,0,") != std::string::npos);
  CHECK(count_lines(r.out) == 9);
}

TEST_CASE("verify: stuck output fails rows with exit 1") {
  // Sum wired permanently high
  std::string path = write_temp(
      "cli_broken.net",
      ".NAME broken\n.NODE vdd ROLE=VDD\n.NODE gnd ROLE=GND\n"
      ".NODE a ROLE=IN\n.NODE b ROLE=IN\n.NODE c ROLE=IN\n"
      ".NODE sum C=20f ROLE=OUT\n.NODE carry C=20f ROLE=OUT\n"
      "M1 sum gnd vdd P\nM2 carry gnd vdd P\n"
      ".INPUTS a b c\n.OUTPUTS sum carry\n");
  CliResult r = run_cli("verify " + path);
  CHECK(r.status == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("verify: unknown circuit exits 2 with a message on stderr") {
  CliResult quiet = run_cli("verify nosuch");
  CHECK(quiet.status == 2);
  CHECK(quiet.out.empty());
  CliResult loud = run_cli("verify nosuch", true);
  CHECK(loud.out.find("nosuch") != std::string::npos);
}

TEST_CASE("ADIASIM_CIRCUITS_DIR overrides the built-in fixtures") {
  auto run_env = [](const std::string& dir, const std::string& args) {
    std::string cmd = "ADIASIM_CIRCUITS_DIR=" + dir + " " + ADIASIM_CLI_PATH +
                      " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, n);
    int rc = pclose(pipe);
    result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return result;
  };

  CliResult from_fixtures = run_env(ADIASIM_CIRCUITS_DIR, "verify pal");
  CHECK(from_fixtures.status == 0);
  CHECK(from_fixtures.out == run_cli("verify pal").out);

  CHECK(run_env("/nonexistent", "verify pal").status == 2);
}

TEST_CASE("power --all prints seven rows with the published device counts") {
  CliResult r = run_cli("power --all --csv");
  CHECK(r.status == 0);
  CHECK(r.out.rfind("circuit,devices,avg_power_w\n", 0) == 0);
  CHECK(count_lines(r.out) == 8);
  for (const char* probe :
       {"cmos28,28,", "cpl,22,", "tgate,20,", "pal,10,", "pfal,38,",
        "tgal,60,", "serf,10,"})
    CHECK(r.out.find(probe) != std::string::npos);

  CliResult human = run_cli("power --all");
  CHECK(human.out.find("22 (24*)") != std::string::npos);
  CHECK(human.out.find("optional pMOS") != std::string::npos);
}

TEST_CASE("power: single circuit reports positive power") {
  CliResult r = run_cli("power --circuit pfal --freq 50e6 --csv");
  CHECK(r.status == 0);
  CHECK(count_lines(r.out) == 2);
  CHECK(r.out.find("pfal,38,") != std::string::npos);
  // value parses and is positive
  std::size_t comma = r.out.rfind(',');
  CHECK(std::stod(r.out.substr(comma + 1)) > 0.0);
}

TEST_CASE("power --freq 0 exits 2") {
  CHECK(run_cli("power --all --freq 0").status == 2);
}

TEST_CASE("sweep: Fig-11 pair, interleaved rows, byte-identical reruns") {
  const std::string args =
      "sweep --circuit tgal --circuit serf --fmin 1e6 --fmax 100e6 --points 20";
  CliResult direct = run_cli(args);
  CHECK(direct.status == 0);
  CHECK(count_lines(direct.out) == 41); // header + 2 circuits x 20 points

  CliResult a = run_cli(args + " --out cli_sweep_a.csv");
  CliResult b = run_cli(args + " --out cli_sweep_b.csv");
  CHECK(a.status == 0);
  CHECK(b.status == 0);
  std::string file_a = read_file("cli_sweep_a.csv");
  std::string file_b = read_file("cli_sweep_b.csv");
  CHECK(!file_a.empty());
  CHECK(file_a == file_b);
  CHECK(file_a == direct.out);
  std::remove("cli_sweep_a.csv");
  std::remove("cli_sweep_b.csv");
}

TEST_CASE("sweep rejects bad ranges and point counts with exit 2") {
  CHECK(run_cli("sweep --circuit serf --points 1").status == 2);
  CHECK(run_cli("sweep --circuit serf --fmin 2e8 --fmax 1e8").status == 2);
  CHECK(run_cli("sweep --circuit serf --fmin 0 --fmax 1e8").status == 2);
}

TEST_CASE("energy calculators print 9-significant-digit values") {
  CliResult eq5 = run_cli("energy eq5 --r 10e3 --c 20e-15 --t 10e-9 --v 1.8");
  CHECK(eq5.status == 0);
  CHECK(eq5.out == "1.296e-15\n");

  CliResult eq6 = run_cli("energy eq6 --c 20e-15 --v 1.8 --n 1");
  CHECK(eq6.status == 0);
  CHECK(eq6.out == "3.24e-14\n");

  CliResult eq2 = run_cli("energy eq2 --is 1e-6 --c 20e-15 --t 10e-9");
  CHECK(eq2.status == 0);
  CHECK(eq2.out == "0.5\n");

  CliResult eq4 = run_cli("energy eq4 --r 10e3 --is 1e-6 --t 10e-9");
  CHECK(eq4.status == 0);
  CHECK(eq4.out == "1e-16\n");

  CHECK(run_cli("energy eq5 --r 10e3 --c 20e-15 --t 10e-9").status == 2);
  CHECK(run_cli("energy eq2 --is 1e-6 --c 0 --t 1e-9").status == 2);
  CHECK(run_cli("energy eq6 --c 20e-15 --v 1.8 --n 0").status == 2);
}

TEST_CASE("lint: clean file exits 0, diagnostics exit 1, parse error 2") {
  std::string clean = write_temp(
      "cli_clean.net",
      ".NODE vdd ROLE=VDD\n.NODE gnd ROLE=GND\n.NODE in ROLE=IN\n"
      ".NODE out C=20f ROLE=OUT\nM1 out in vdd P\nM2 out in gnd N\n"
      ".INPUTS in\n.OUTPUTS out\n");
  CHECK(run_cli("lint " + clean).status == 0);
  std::remove(clean.c_str());

  std::string floating = write_temp(
      "cli_floating.net",
      ".NODE vdd ROLE=VDD\n.NODE gnd ROLE=GND\n.NODE a\n.NODE lonely\n"
      "M1 a a vdd P\n");
  CliResult diag = run_cli("lint " + floating);
  CHECK(diag.status == 1);
  CHECK(diag.out.find("FloatingNode") != std::string::npos);
  CHECK(diag.out.find("lonely") != std::string::npos);
  std::remove(floating.c_str());

  std::string broken = write_temp("cli_parse_error.net", "garbage line\n");
  CHECK(run_cli("lint " + broken).status == 2);
  std::remove(broken.c_str());
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("").status == 2);
  CHECK(run_cli("frobnicate").status == 2);
  CHECK(run_cli("sweep").status == 2); // --circuit required
}
