#include <doctest.h>

#include <fstream>
#include <string>

#include "clakit/celllib.hpp"

using namespace clakit;

TEST_SUITE("celllib") {

TEST_CASE("builtin unit library") {
  CellLibrary lib = builtin_unit_library();
  CHECK(lib.max_fanin() == 4);
  CHECK(lib.mode() == LibraryMode::constrained);
  CHECK(lib.lookup(CellKind::AO21, 3).delay == doctest::Approx(1.0));
  CHECK_NOTHROW(lib.validate());
  CHECK_THROWS_AS(lib.lookup(CellKind::AND, 5), cell_not_found);
}

TEST_CASE("load well-formed library file") {
  const char* text =
      "name = demo\n"
      "mode = constrained\n"
      "max_fanin = 4\n"
      "units_time = ns\n"
      "# comment line\n"
      "[cell] kind=XOR fanin=2 delay=1.0 area=1.0 switch_energy=1.0 leakage=0.0\n"
      "[cell] kind=AND fanin=2 delay=1.0 area=1.0 switch_energy=1.0\n"
      "[cell] kind=AND fanin=3 delay=1.0 area=1.5 switch_energy=1.5\n"
      "[cell] kind=AND fanin=4 delay=1.0 area=2.0 switch_energy=2.0\n"
      "[cell] kind=OR fanin=2 delay=1.0 area=1.0 switch_energy=1.0\n"
      "[cell] kind=OR fanin=3 delay=1.0 area=1.5 switch_energy=1.5\n"
      "[cell] kind=OR fanin=4 delay=1.0 area=2.0 switch_energy=2.0\n"
      "[cell] kind=AO21 fanin=3 delay=1.0 area=1.5 switch_energy=1.5\n"
      "[cell] kind=INV fanin=1 delay=0.5 area=0.5 switch_energy=0.5\n";
  CellLibrary lib = parse_library(text, "demo.lib");
  CHECK(lib.name() == "demo");
  CHECK(lib.max_fanin() == 4);
  CHECK(lib.units_time == "ns");
  CHECK(lib.lookup(CellKind::AND, 3).area == doctest::Approx(1.5));
}

TEST_CASE("multi-line cell sections parse too") {
  const char* text =
      "name = split\n"
      "[cell]\n"
      "kind = XOR\n"
      "fanin = 2\n"
      "delay = 1.0\n"
      "[cell] kind=AND fanin=2 delay=1\n"
      "[cell] kind=OR fanin=2 delay=1\n"
      "[cell] kind=AO21 fanin=3 delay=1\n"
      "[cell] kind=INV fanin=1 delay=1\n";
  CellLibrary lib = parse_library(text, "split.lib");
  CHECK(lib.lookup(CellKind::XOR, 2).delay == doctest::Approx(1.0));
}

TEST_CASE("constrained library rejects cells wider than max_fanin") {
  const char* text =
      "name = bad\nmax_fanin = 4\n"
      "[cell] kind=AND fanin=5 delay=1\n";
  CHECK_THROWS_WITH_AS(parse_library(text, "bad.lib"),
                       doctest::Contains("exceeds max_fanin"), library_error);
}

TEST_CASE("missing mandatory cell is reported by name") {
  const char* text =
      "name = noao21\n"
      "[cell] kind=XOR fanin=2 delay=1\n"
      "[cell] kind=AND fanin=2 delay=1\n"
      "[cell] kind=OR fanin=2 delay=1\n"
      "[cell] kind=INV fanin=1 delay=1\n";
  CHECK_THROWS_WITH_AS(parse_library(text, "noao21.lib"), doctest::Contains("AO21"),
                       library_error);
}

TEST_CASE("duplicate cell definition is an error") {
  const char* text =
      "name = dup\n"
      "[cell] kind=AND fanin=2 delay=1\n"
      "[cell] kind=AND fanin=2 delay=2\n";
  CHECK_THROWS_WITH_AS(parse_library(text, "dup.lib"), doctest::Contains("duplicate"),
                       library_error);
}

TEST_CASE("illegal fan-in for a kind is an error") {
  const char* text = "name = bad\n[cell] kind=AND fanin=1 delay=1\n";
  CHECK_THROWS_WITH_AS(parse_library(text, "bad.lib"), doctest::Contains("illegal fan-in"),
                       library_error);
}

TEST_CASE("ideal mode synthesizes wide AND/OR") {
  CellLibrary ideal = builtin_unit_library(LibraryMode::ideal);
  Cell or5 = ideal.lookup(CellKind::OR, 5);
  CHECK(or5.fanin == 5);
  CHECK(or5.delay == doctest::Approx(1.0 + 0.2 * 3));  // delay(2) * (1 + growth*(k-2))
  CHECK(or5.area == doctest::Approx(4.0));
  CHECK(or5.switch_energy == doctest::Approx(4.0));

  // constrained mode refuses the same request
  CellLibrary constrained = builtin_unit_library();
  CHECK_THROWS_AS(constrained.lookup(CellKind::OR, 5), cell_not_found);
  try {
    constrained.lookup(CellKind::OR, 5);
  } catch (const cell_not_found& e) {
    CHECK(e.kind == CellKind::OR);
    CHECK(e.fanin == 5);
  }
}

TEST_CASE("lookups return the requested fan-in and respect the limit") {
  for (LibraryMode mode : {LibraryMode::constrained, LibraryMode::ideal}) {
    CellLibrary lib = builtin_unit_library(mode);
    for (const auto& [key, cell] : lib.cells()) {
      Cell found = lib.lookup(key.first, key.second);
      CHECK(found.fanin == key.second);
      if (mode == LibraryMode::constrained) CHECK(found.fanin <= lib.max_fanin());
    }
  }
  CellLibrary ideal = builtin_unit_library(LibraryMode::ideal);
  for (unsigned f = 2; f <= 9; ++f) CHECK(ideal.lookup(CellKind::AND, f).fanin == f);
}

TEST_CASE("load from an actual file") {
  const std::string path = "celllib_test.lib";
  {
    std::ofstream out(path);
    out << serialize_library(builtin_unit_library());
  }
  CellLibrary lib = load_library(path);
  CHECK(lib.name() == "unit");
  CHECK(lib.max_fanin() == 4);
  CHECK(lib.lookup(CellKind::AND, 4).delay == doctest::Approx(1.0));
  CHECK_THROWS_AS(load_library("does_not_exist.lib"), library_error);
}

TEST_CASE("serialize / parse round trip") {
  CellLibrary lib = builtin_unit_library();
  CellLibrary back = parse_library(serialize_library(lib), "roundtrip");
  CHECK(back.name() == lib.name());
  CHECK(back.mode() == lib.mode());
  CHECK(back.max_fanin() == lib.max_fanin());
  CHECK(back.units_time == lib.units_time);
  CHECK(back.units_area == lib.units_area);
  CHECK(back.units_energy == lib.units_energy);
  REQUIRE(back.cells().size() == lib.cells().size());
  for (const auto& [key, cell] : lib.cells()) {
    Cell other = back.lookup(key.first, key.second);
    CHECK(other.delay == cell.delay);
    CHECK(other.area == cell.area);
    CHECK(other.switch_energy == cell.switch_energy);
    CHECK(other.leakage == cell.leakage);
  }
  // and the serialized form itself is stable
  CHECK(serialize_library(back) == serialize_library(lib));
}

}  // TEST_SUITE
