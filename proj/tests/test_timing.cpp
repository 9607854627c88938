#include <doctest.h>

#include <functional>
#include <memory>

#include "clakit/genarch.hpp"
#include "clakit/timing.hpp"

using namespace clakit;

namespace {

LibraryRef unit_lib() { return std::make_shared<CellLibrary>(builtin_unit_library()); }
LibraryRef ideal_lib() {
  return std::make_shared<CellLibrary>(builtin_unit_library(LibraryMode::ideal));
}

LibraryRef scaled_lib(double s) {
  CellLibrary base = builtin_unit_library();
  auto lib = std::make_shared<CellLibrary>("unit", base.mode(), base.max_fanin());
  for (const auto& [key, cell] : base.cells()) {
    Cell c = cell;
    c.delay *= s;
    lib->add_cell(c);
  }
  return lib;
}

/// Brute-force longest arrival by enumerating every path from every
/// primary input (exponential; for tiny netlists only).
double enumerate_arrival(const Netlist& nl, NetId target) {
  std::vector<int32_t> drv = nl.drivers();
  std::function<double(NetId)> longest = [&](NetId n) -> double {
    if (drv[n] < 0) return 0.0;
    const GateInstance& g = nl.gates()[drv[n]];
    double best = 0.0;
    for (NetId in : g.inputs) best = std::max(best, longest(in));
    return best + g.cell.delay;
  };
  return longest(target);
}

}  // namespace

TEST_SUITE("timing") {

TEST_CASE("single AO21 has unit critical delay") {
  LibraryRef lib = unit_lib();
  Netlist nl("one_ao21", lib);
  NetId a = nl.add_input("a");
  NetId b = nl.add_input("b");
  NetId c = nl.add_input("c");
  nl.mark_output(nl.add_gate(lib->lookup(CellKind::AO21, 3), {a, b, c}, "y", "ao21"));
  TimingReport report = analyze(nl);
  CHECK(report.critical_delay == 1.0);
  REQUIRE(report.critical_path.size() == 1);
}

TEST_CASE("4-bit ripple adder critical delay is 5 gate stages") {
  Netlist nl = build_rca(4, unit_lib());
  TimingReport report = analyze(nl);
  CHECK(report.critical_delay == 5.0);
  CHECK(report.critical_path.size() == 5);
  // P/G stage, then the three rippling AO21s, then the last sum XOR
  for (size_t i = 1; i <= 3; ++i)
    CHECK(nl.gates()[report.critical_path[i]].cell.kind == CellKind::AO21);
  CHECK(nl.gates()[report.critical_path[4]].cell.kind == CellKind::XOR);
}

TEST_CASE("ripple adder delay is affine in width with slope delay(AO21)") {
  LibraryRef lib = unit_lib();
  const double ao21 = lib->lookup(CellKind::AO21, 3).delay;
  double prev = analyze(build_rca(1, lib)).critical_delay;
  for (unsigned n = 2; n <= 32; ++n) {
    double now = analyze(build_rca(n, lib)).critical_delay;
    CHECK(now - prev == ao21);
    prev = now;
  }
}

TEST_CASE("carry input reaches every decomposed lookahead output in one AO21 delay") {
  LibraryRef lib = unit_lib();
  const double ao21 = lib->lookup(CellKind::AO21, 3).delay;
  for (unsigned m = 1; m <= 8; ++m) {
    Netlist clg = build_decomposed_clg(m, lib);
    NetId c0 = *clg.find_net("C0");
    for (unsigned k = 1; k <= m; ++k)
      CHECK(path_delay(clg, c0, *clg.find_net("C" + std::to_string(k))) == ao21);
    Netlist sclg = build_decomposed_sclg(m, lib);
    CHECK(path_delay(sclg, *sclg.find_net("C0"), *sclg.find_net("C" + std::to_string(m))) ==
          ao21);
  }
}

TEST_CASE("basic generator carry path costs a wide AND plus a wide OR") {
  LibraryRef lib = ideal_lib();
  Netlist clg = build_basic_clg(4, lib);
  double want = lib->lookup(CellKind::AND, 5).delay + lib->lookup(CellKind::OR, 5).delay;
  CHECK(path_delay(clg, *clg.find_net("C0"), *clg.find_net("C4")) == want);
  // and each lower carry pays (K+1)-input gates
  for (unsigned k = 1; k <= 4; ++k) {
    double stage = lib->lookup(CellKind::AND, k + 1).delay + lib->lookup(CellKind::OR, k + 1).delay;
    CHECK(path_delay(clg, *clg.find_net("C0"), *clg.find_net("C" + std::to_string(k))) == stage);
  }
}

TEST_CASE("decomposition wins where the carry chains: C0 path and composed adders") {
  LibraryRef lib = ideal_lib();
  Netlist basic = build_basic_clg(4, lib);
  Netlist decomposed = build_decomposed_clg(4, lib);
  NetId c0b = *basic.find_net("C0");
  NetId c0d = *decomposed.find_net("C0");
  CHECK(path_delay(decomposed, c0d, *decomposed.find_net("C4")) <
        path_delay(basic, c0b, *basic.find_net("C4")));

  // at the 32-bit scale the section-to-section carry path dominates
  AdderSpec hom = *find_named_spec("homogeneous-ccla");
  Netlist dec32 = build_adder(hom, lib);
  for (auto& seg : hom.segments) seg.style = GeneratorStyle::basic;
  hom.name = "homogeneous-ccla-basic";
  Netlist bas32 = build_adder(hom, lib);
  CHECK(analyze(dec32).critical_delay < analyze(bas32).critical_delay);
}

TEST_CASE("unreachable path is an error") {
  Netlist nl = build_decomposed_clg(2, unit_lib());
  CHECK_THROWS_AS(path_delay(nl, *nl.find_net("C1"), *nl.find_net("P0")), timing_error);
}

TEST_CASE("uniform delay scaling scales every arrival and keeps the path") {
  Netlist base = build_adder(*find_named_spec("hybrid-ccla-2"), unit_lib());
  Netlist twice = build_adder(*find_named_spec("hybrid-ccla-2"), scaled_lib(2.0));
  TimingReport a = analyze(base);
  TimingReport b = analyze(twice);
  REQUIRE(a.arrival.size() == b.arrival.size());
  for (size_t n = 0; n < a.arrival.size(); ++n) CHECK(b.arrival[n] == 2.0 * a.arrival[n]);
  CHECK(b.critical_delay == 2.0 * a.critical_delay);
  CHECK(a.critical_path == b.critical_path);
}

TEST_CASE("analyze agrees with exhaustive path enumeration on small netlists") {
  for (auto nl : {build_decomposed_clg(4, unit_lib()), build_decomposed_sclg(4, unit_lib()),
                  build_basic_clg(3, unit_lib()), build_rca(4, unit_lib())}) {
    TimingReport report = analyze(nl);
    for (NetId n = 0; n < nl.net_count(); ++n)
      REQUIRE(report.arrival[n] == enumerate_arrival(nl, n));
  }
}

TEST_CASE("rank_by_delay ordering") {
  TimingReport r1, r2, r3;
  r1.critical_delay = 2.0;
  r2.critical_delay = 1.0;
  r3.critical_delay = 2.0;
  SUBCASE("singleton") {
    auto ranking = rank_by_delay({{"only", r1}});
    REQUIRE(ranking.size() == 1);
    CHECK(ranking[0].name == "only");
  }
  SUBCASE("ties break on the name") {
    auto ranking = rank_by_delay({{"zeta", r3}, {"alpha", r1}, {"mid", r2}});
    REQUIRE(ranking.size() == 3);
    CHECK(ranking[0].name == "mid");
    CHECK(ranking[1].name == "alpha");
    CHECK(ranking[2].name == "zeta");
  }
}

TEST_CASE("critical path rendering") {
  Netlist nl = build_rca(2, unit_lib());
  TimingReport report = analyze(nl);
  std::string text = format_critical_path(nl, report);
  CHECK(text.find(" -> ") != std::string::npos);
  CHECK(text.find("Sum1") != std::string::npos);
  std::string json = timing_report_json(nl, report);
  CHECK(json.find("\"critical_delay\": 3.0") != std::string::npos);
}

TEST_CASE("ranking of the ten canonical designs under the unit library") {
  std::vector<std::pair<std::string, TimingReport>> reports;
  for (const auto& spec : named_specs())
    reports.emplace_back(spec.name, analyze(build_adder(spec, unit_lib())));
  auto ranking = rank_by_delay(reports);
  REQUIRE(ranking.size() == 10);
  // frozen at first build; gate-stage counts of the unit-delay model
  const std::vector<std::pair<std::string, double>> frozen = {
      {"homogeneous-ccla", 12.0},  {"hybrid-ccla-2", 12.0},    {"hybrid-ccla-3", 12.0},
      {"hybrid-ccla-1", 13.0},     {"hybrid-ccla-4", 13.0},    {"hybrid-scbcla-3", 13.0},
      {"hybrid-scbcla-4", 13.0},   {"homogeneous-scbcla", 14.0}, {"hybrid-scbcla-2", 14.0},
      {"hybrid-scbcla-1", 15.0},
  };
  for (size_t i = 0; i < frozen.size(); ++i) {
    CHECK(ranking[i].name == frozen[i].first);
    CHECK(ranking[i].critical_delay == frozen[i].second);
  }
}

}  // TEST_SUITE
