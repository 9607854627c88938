#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clakit {

/// Gate functions supported by the library model.  AO21 computes (a*b)+c.
enum class CellKind : uint8_t {
  INV,
  BUF,
  AND,
  OR,
  NAND,
  NOR,
  XOR,
  XNOR,
  AO21,
};

const char* to_string(CellKind kind);
std::optional<CellKind> cell_kind_from_string(std::string_view s);

/// Fan-in range a kind admits regardless of any library-wide limit:
/// INV/BUF are 1-input, XOR/XNOR 2-input, AO21 3-input, and the
/// variadic kinds (AND/OR/NAND/NOR) start at 2.
struct FaninRange {
  unsigned min;
  unsigned max;
};
FaninRange legal_fanin(CellKind kind);

/// One library gate.  Delay, area and energy are in the abstract units
/// declared by the owning library.
struct Cell {
  CellKind kind;
  unsigned fanin;
  double delay;
  double area;
  double switch_energy;  // energy per output toggle
  double leakage;        // static power

  std::string name() const;  // "AND3", "XOR2", "AO21", "INV"
};

enum class LibraryMode : uint8_t { constrained, ideal };

class library_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class cell_not_found : public library_error {
 public:
  cell_not_found(CellKind kind, unsigned fanin, const std::string& msg)
      : library_error(msg), kind(kind), fanin(fanin) {}

  CellKind kind;
  unsigned fanin;
};

/// A set of cells keyed by (kind, fanin) plus the global fan-in limit.
///
/// In constrained mode a lookup only ever returns a cell present in the
/// set, and no cell may exceed max_fanin.  In ideal mode AND/OR cells of
/// any width can be synthesized on demand; their delay grows by
/// ideal_delay_growth * delay(2) per input beyond two, and area/energy
/// grow linearly with (fanin - 1).
///
/// Immutable once built; concurrent read access is safe.
class CellLibrary {
 public:
  CellLibrary(std::string name, LibraryMode mode, unsigned max_fanin);

  void add_cell(const Cell& cell);

  /// Checks the mandatory cell set (XOR2, AND2, OR2, AO21, INV) is present.
  void validate() const;

  /// Returns the cell, synthesizing wide AND/OR in ideal mode.
  /// Throws cell_not_found otherwise.
  Cell lookup(CellKind kind, unsigned fanin) const;

  bool has_cell(CellKind kind, unsigned fanin) const;

  const std::string& name() const { return name_; }
  LibraryMode mode() const { return mode_; }
  unsigned max_fanin() const { return max_fanin_; }
  const std::map<std::pair<CellKind, unsigned>, Cell>& cells() const { return cells_; }

  std::string units_time = "ns";
  std::string units_area = "um2";
  std::string units_energy = "fJ";
  double ideal_delay_growth = 0.2;

 private:
  std::string name_;
  LibraryMode mode_;
  unsigned max_fanin_;
  std::map<std::pair<CellKind, unsigned>, Cell> cells_;
};

/// Default library: unit delay/area/switch energy, zero leakage, fan-in
/// capped at 4.  Contains INV, XOR2, XNOR2, AND2-4, OR2-4, NAND2-4,
/// NOR2-4 and AO21.
CellLibrary builtin_unit_library(LibraryMode mode = LibraryMode::constrained);

CellLibrary parse_library(std::string_view text, const std::string& origin);
CellLibrary load_library(const std::string& path);
std::string serialize_library(const CellLibrary& lib);

}  // namespace clakit
