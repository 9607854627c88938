#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "clakit/genarch.hpp"
#include "clakit/netlist.hpp"

using namespace clakit;

namespace {

const char* kCli = CLAKIT_CLI_PATH;
const char* kData = CLAKIT_DATA_DIR;

struct RunResult {
  int exit_code;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string out_file = "cli_test_stdout.tmp";
  std::string cmd = env_prefix + std::string(kCli) + " " + args + " > " + out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_file);
  return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate exports verilog") {
  RunResult r = run("generate --arch hybrid-scbcla-4 --format verilog");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("module hybrid_scbcla_4") != std::string::npos);
  CHECK(r.out.find("AO21") != std::string::npos);
}

TEST_CASE("generate of an infeasible basic design names the missing gate") {
  RunResult r = run("generate --arch \"ccla:4*8\" --style basic --lib builtin");
  CHECK(r.exit_code == 3);
  CHECK(r.out.find("OR5") != std::string::npos);
  // the same request under the ideal library is buildable
  CHECK(run("generate --arch \"ccla:4*8\" --style basic --lib ideal --format dot").exit_code == 0);
}

TEST_CASE("generate json round trips through the importer") {
  RunResult r = run("generate --arch homogeneous-ccla --format json");
  REQUIRE(r.exit_code == 0);
  auto lib = std::make_shared<CellLibrary>(builtin_unit_library());
  Netlist back = import_json(r.out, lib);
  CHECK(export_json(back) == r.out);
}

TEST_CASE("verify passes and fails with the documented exit codes") {
  CHECK(run("verify --arch \"rca:6\" --exhaustive").exit_code == 0);
  CHECK(run("verify --arch hybrid-ccla-2 --random 5000 --seed 42").exit_code == 0);
  SUBCASE("exhaustive cap is a usage error with guidance") {
    RunResult r = run("verify --arch \"rca:12\" --exhaustive");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("cap") != std::string::npos);
  }
  SUBCASE("random without seed is refused") {
    CHECK(run("verify --arch \"rca:4\" --random 100").exit_code == 2);
  }
  SUBCASE("bad arch text is a usage-or-build error") {
    CHECK(run("verify --arch \"warp:9\" --exhaustive").exit_code == 3);
  }
}

TEST_CASE("bench is deterministic and paper mode reproduces the published FOMs") {
  SUBCASE("same seed, byte-identical CSV") {
    RunResult a = run("bench --arch homogeneous-scbcla --arch \"rca:32\" "
                      "--vectors random:200:7 --period 5");
    RunResult b = run("bench --arch homogeneous-scbcla --arch \"rca:32\" "
                      "--vectors random:200:7 --period 5");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("name,power,delay,area,fom") == 0);
  }
  SUBCASE("paper mode") {
    RunResult r = run(std::string("bench --paper-mode ") + kData + "/paper_tables.csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("hybrid-ccla-3,39.13,1.08,586.56,40.34") != std::string::npos);
    CHECK(r.out.find("hybrid-scbcla-4,41.63,1.12,461.02,46.52") != std::string::npos);
  }
  SUBCASE("missing vector source is a usage error") {
    CHECK(run("bench --arch \"rca:8\"").exit_code == 2);
  }
}

TEST_CASE("compare reproduces the published percentages from CSV sources") {
  const std::string sources = std::string(" --source ") + kData + "/paper_tables.csv" +
                              " --source " + kData + "/prior_work.csv";
  SUBCASE("FOM edge of hybrid-scbcla-4 over hybrid-ccla-3") {
    RunResult r = run("compare --baseline hybrid-ccla-3 --candidate hybrid-scbcla-4" + sources);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FOM gain        : 15.3 %") != std::string::npos);
  }
  SUBCASE("gain over the prior-work best FOM") {
    RunResult r =
        run("compare --baseline prior-hybrid-ccla-best --candidate hybrid-ccla-3" + sources);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FOM gain        : 79.3 %") != std::string::npos);
  }
  SUBCASE("delay reduction and speedup against the prior-work fastest") {
    RunResult r =
        run("compare --baseline prior-hybrid-ccla-fastest --candidate hybrid-ccla-2" + sources);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("delay reduction : 51.8 %") != std::string::npos);
    CHECK(r.out.find("speedup         : 107.6 %") != std::string::npos);
  }
  SUBCASE("self comparison is all zeros") {
    RunResult r = run("compare --baseline hybrid-ccla-3 --candidate hybrid-ccla-3" + sources);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FOM gain        : 0.0 %") != std::string::npos);
  }
  SUBCASE("unknown design is a usage error") {
    CHECK(run("compare --baseline nope --candidate hybrid-ccla-3" + sources).exit_code == 2);
  }
}

TEST_CASE("CLAKIT_LIB picks the default library") {
  // basic 4-bit generation only builds when the env default is the ideal library
  RunResult with_env = run("generate --arch \"ccla:4\" --style basic --format dot",
                           "CLAKIT_LIB=ideal ");
  CHECK(with_env.exit_code == 0);
  CHECK(run("generate --arch \"ccla:4\" --style basic --format dot").exit_code == 3);
}

TEST_CASE("bench refuses mixed vector sources") {
  RunResult r = run(std::string("bench --paper-mode ") + kData +
                    "/paper_tables.csv --vectors random:10:1");
  CHECK(r.exit_code != 0);
}

TEST_CASE("bench can dump VCD waveforms") {
  RunResult r = run("bench --arch \"rca:4\" --vectors random:20:3 --period 5 "
                    "--vcd-dir cli_test_vcd --out cli_test_bench.csv");
  CHECK(r.exit_code == 0);
  std::string vcd = slurp("cli_test_vcd/rca:4.vcd");
  CHECK(vcd.find("$timescale") != std::string::npos);
}

}  // TEST_SUITE
