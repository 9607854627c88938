#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clakit/netlist.hpp"

namespace clakit {

enum class SegmentKind : uint8_t { RCA, CCLA, SCBCLA };
enum class GeneratorStyle : uint8_t { basic, decomposed };

const char* to_string(SegmentKind kind);
const char* to_string(GeneratorStyle style);

struct SegmentSpec {
  SegmentKind kind;
  unsigned width;  // m >= 1
  GeneratorStyle style = GeneratorStyle::decomposed;  // ignored for RCA
};

/// An adder as an ordered list of segments, least significant first.
/// The carry out of segment k feeds the carry in of segment k+1.
struct AdderSpec {
  std::string name;
  std::vector<SegmentSpec> segments;
  unsigned total_width() const;
};

class build_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LibraryRef = std::shared_ptr<const CellLibrary>;

// Stand-alone fragments with propagate/generate ports, named after the
// signals they carry: P0.., G0.., C0 in; C1..Cm out (Cm only for the
// section-carry generators).

/// m AND2 + m XOR2 producing Pi = Ai ^ Bi, Gi = Ai & Bi.
Netlist build_pg(unsigned width, LibraryRef lib);

/// Flat two-level AND-OR form of each carry equation.  Needs gates of
/// fan-in up to m+1, so a 4-bit generator only builds under an
/// ideal-mode library; under a constrained one the missing wide gate is
/// reported via cell_not_found.
Netlist build_basic_clg(unsigned width, LibraryRef lib);

/// Factored form: per carry, fan-in-bounded AND trees for the product
/// groups, an OR tree for the carry-independent group N, and a single
/// AO21 (M, C0, N) as the only gate touching the carry input.
Netlist build_decomposed_clg(unsigned width, LibraryRef lib);

Netlist build_basic_sclg(unsigned width, LibraryRef lib);
Netlist build_decomposed_sclg(unsigned width, LibraryRef lib);

// Adder-shaped netlists: PIs A0..A{n-1}, B0..B{n-1}, Cin; POs
// Sum0..Sum{n-1}, Cout.

Netlist build_rca(unsigned width, LibraryRef lib);
Netlist build_ccla_block(unsigned width, GeneratorStyle style, LibraryRef lib);
Netlist build_scbcla_block(unsigned width, GeneratorStyle style, LibraryRef lib);
Netlist build_adder(const AdderSpec& spec, LibraryRef lib);

/// The ten canonical 32-bit compositions: homogeneous CCLA/SCBCLA plus
/// the four hybrid variants of each, all with decomposed generators.
std::vector<AdderSpec> named_specs();
std::optional<AdderSpec> find_named_spec(std::string_view name);

/// Parses "rca:2,scbcla:2,scbcla:4*6,scbcla:3,rca:1" (LSB first) or a
/// named alias.  The style applies to every CLA segment.
AdderSpec parse_adder_spec(std::string_view text,
                           GeneratorStyle style = GeneratorStyle::decomposed);

}  // namespace clakit
