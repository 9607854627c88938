#include "clakit/celllib.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace clakit {

namespace {

struct KindName {
  CellKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {CellKind::INV, "INV"},   {CellKind::BUF, "BUF"},   {CellKind::AND, "AND"},
    {CellKind::OR, "OR"},     {CellKind::NAND, "NAND"}, {CellKind::NOR, "NOR"},
    {CellKind::XOR, "XOR"},   {CellKind::XNOR, "XNOR"}, {CellKind::AO21, "AO21"},
};

bool is_variadic(CellKind kind) {
  switch (kind) {
    case CellKind::AND:
    case CellKind::OR:
    case CellKind::NAND:
    case CellKind::NOR:
      return true;
    default:
      return false;
  }
}

}  // namespace

const char* to_string(CellKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "?";
}

std::optional<CellKind> cell_kind_from_string(std::string_view s) {
  for (const auto& kn : kKindNames)
    if (s == kn.name) return kn.kind;
  return std::nullopt;
}

FaninRange legal_fanin(CellKind kind) {
  switch (kind) {
    case CellKind::INV:
    case CellKind::BUF:
      return {1, 1};
    case CellKind::XOR:
    case CellKind::XNOR:
      return {2, 2};
    case CellKind::AO21:
      return {3, 3};
    default:
      return {2, ~0u};
  }
}

std::string Cell::name() const {
  std::string n = to_string(kind);
  if (is_variadic(kind) || kind == CellKind::XOR || kind == CellKind::XNOR)
    n += std::to_string(fanin);
  return n;
}

CellLibrary::CellLibrary(std::string name, LibraryMode mode, unsigned max_fanin)
    : name_(std::move(name)), mode_(mode), max_fanin_(max_fanin) {
  if (max_fanin_ < 3)
    throw library_error("library '" + name_ + "': max_fanin must be at least 3 (AO21)");
}

void CellLibrary::add_cell(const Cell& cell) {
  const FaninRange range = legal_fanin(cell.kind);
  const std::string cname = std::string(to_string(cell.kind)) + "/" + std::to_string(cell.fanin);
  if (cell.fanin < range.min || cell.fanin > range.max)
    throw library_error("library '" + name_ + "': cell " + cname + " has illegal fan-in");
  if (mode_ == LibraryMode::constrained && cell.fanin > max_fanin_)
    throw library_error("library '" + name_ + "': cell " + cname + " exceeds max_fanin " +
                        std::to_string(max_fanin_));
  if (cell.delay <= 0)
    throw library_error("library '" + name_ + "': cell " + cname + " needs delay > 0");
  if (cell.area < 0 || cell.switch_energy < 0 || cell.leakage < 0)
    throw library_error("library '" + name_ + "': cell " + cname + " has negative metrics");
  auto [it, inserted] = cells_.emplace(std::make_pair(cell.kind, cell.fanin), cell);
  (void)it;
  if (!inserted)
    throw library_error("library '" + name_ + "': duplicate cell " + cname);
}

void CellLibrary::validate() const {
  static const std::pair<CellKind, unsigned> mandatory[] = {
      {CellKind::XOR, 2}, {CellKind::AND, 2}, {CellKind::OR, 2},
      {CellKind::AO21, 3}, {CellKind::INV, 1},
  };
  for (const auto& [kind, fanin] : mandatory) {
    if (!has_cell(kind, fanin)) {
      Cell probe{kind, fanin, 1, 0, 0, 0};
      throw library_error("library '" + name_ + "': missing mandatory cell " + probe.name());
    }
  }
}

bool CellLibrary::has_cell(CellKind kind, unsigned fanin) const {
  return cells_.count({kind, fanin}) != 0;
}

Cell CellLibrary::lookup(CellKind kind, unsigned fanin) const {
  auto it = cells_.find({kind, fanin});
  if (it != cells_.end()) return it->second;

  if (mode_ == LibraryMode::ideal && (kind == CellKind::AND || kind == CellKind::OR) &&
      fanin >= 2) {
    auto base = cells_.find({kind, 2});
    if (base == cells_.end())
      throw cell_not_found(kind, fanin,
                           "library '" + name_ + "': cannot synthesize " +
                               std::string(to_string(kind)) + std::to_string(fanin) +
                               " without a 2-input base cell");
    Cell c = base->second;
    c.fanin = fanin;
    c.delay = c.delay * (1.0 + ideal_delay_growth * (fanin - 2));
    c.area = c.area * (fanin - 1);
    c.switch_energy = c.switch_energy * (fanin - 1);
    c.leakage = c.leakage * (fanin - 1);
    return c;
  }

  Cell probe{kind, fanin, 1, 0, 0, 0};
  throw cell_not_found(kind, fanin,
                       "library '" + name_ + "': no cell " + probe.name() +
                           " (" + std::to_string(fanin) + "-input " + to_string(kind) +
                           (mode_ == LibraryMode::constrained && fanin > max_fanin_
                                ? " exceeds max_fanin " + std::to_string(max_fanin_) + ")"
                                : " not defined)"));
}

CellLibrary builtin_unit_library(LibraryMode mode) {
  CellLibrary lib(mode == LibraryMode::ideal ? "unit-ideal" : "unit", mode, 4);
  auto add = [&lib](CellKind kind, unsigned fanin) {
    lib.add_cell(Cell{kind, fanin, 1.0, 1.0, 1.0, 0.0});
  };
  add(CellKind::INV, 1);
  add(CellKind::XOR, 2);
  add(CellKind::XNOR, 2);
  for (unsigned f = 2; f <= 4; ++f) {
    add(CellKind::AND, f);
    add(CellKind::OR, f);
    add(CellKind::NAND, f);
    add(CellKind::NOR, f);
  }
  add(CellKind::AO21, 3);
  lib.validate();
  return lib;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(const std::string& value, const std::string& where) {
  size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw library_error(where + ": bad number '" + value + "'");
  }
  if (pos != value.size()) throw library_error(where + ": bad number '" + value + "'");
  return d;
}

unsigned parse_count(const std::string& value, const std::string& where) {
  size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(value, &pos);
  } catch (const std::exception&) {
    throw library_error(where + ": bad count '" + value + "'");
  }
  if (pos != value.size()) throw library_error(where + ": bad count '" + value + "'");
  return static_cast<unsigned>(v);
}

struct PendingCell {
  std::optional<CellKind> kind;
  std::optional<unsigned> fanin;
  double delay = 0;
  bool have_delay = false;
  double area = 0, switch_energy = 0, leakage = 0;
};

}  // namespace

CellLibrary parse_library(std::string_view text, const std::string& origin) {
  std::string name = "library";
  LibraryMode mode = LibraryMode::constrained;
  unsigned max_fanin = 4;
  std::string units_time = "ns", units_area = "um2", units_energy = "fJ";
  double ideal_delay_growth = 0.2;

  std::vector<PendingCell> pending;
  bool in_cell = false;

  auto apply_cell_kv = [&](const std::string& key, const std::string& value,
                           const std::string& where) {
    PendingCell& c = pending.back();
    if (key == "kind") {
      auto k = cell_kind_from_string(value);
      if (!k) throw library_error(where + ": unknown cell kind '" + value + "'");
      c.kind = *k;
    } else if (key == "fanin") {
      c.fanin = parse_count(value, where);
    } else if (key == "delay") {
      c.delay = parse_number(value, where);
      c.have_delay = true;
    } else if (key == "area") {
      c.area = parse_number(value, where);
    } else if (key == "switch_energy") {
      c.switch_energy = parse_number(value, where);
    } else if (key == "leakage") {
      c.leakage = parse_number(value, where);
    } else {
      throw library_error(where + ": unknown cell key '" + key + "'");
    }
  };

  auto apply_header_kv = [&](const std::string& key, const std::string& value,
                             const std::string& where) {
    if (key == "name") {
      name = value;
    } else if (key == "mode") {
      if (value == "constrained")
        mode = LibraryMode::constrained;
      else if (value == "ideal")
        mode = LibraryMode::ideal;
      else
        throw library_error(where + ": mode must be 'constrained' or 'ideal'");
    } else if (key == "max_fanin") {
      max_fanin = parse_count(value, where);
    } else if (key == "units_time") {
      units_time = value;
    } else if (key == "units_area") {
      units_area = value;
    } else if (key == "units_energy") {
      units_energy = value;
    } else if (key == "ideal_delay_growth") {
      ideal_delay_growth = parse_number(value, where);
    } else {
      throw library_error(where + ": unknown header key '" + key + "'");
    }
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string where = origin + ":" + std::to_string(lineno);
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.substr(0, 6) == "[cell]") {
      pending.emplace_back();
      in_cell = true;
      line = trim(line.substr(6));
      std::istringstream toks{std::string(line)};
      std::string tok;
      while (toks >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
          throw library_error(where + ": expected key=value, got '" + tok + "'");
        apply_cell_kv(tok.substr(0, eq), tok.substr(eq + 1), where);
      }
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw library_error(where + ": expected key=value, got '" + std::string(line) + "'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (in_cell)
      apply_cell_kv(key, value, where);
    else
      apply_header_kv(key, value, where);
  }

  CellLibrary lib(name, mode, max_fanin);
  lib.units_time = units_time;
  lib.units_area = units_area;
  lib.units_energy = units_energy;
  lib.ideal_delay_growth = ideal_delay_growth;
  for (size_t i = 0; i < pending.size(); ++i) {
    const PendingCell& c = pending[i];
    std::string where = origin + ": cell #" + std::to_string(i + 1);
    if (!c.kind) throw library_error(where + ": missing kind");
    if (!c.fanin) throw library_error(where + ": missing fanin");
    if (!c.have_delay) throw library_error(where + ": missing delay");
    lib.add_cell(Cell{*c.kind, *c.fanin, c.delay, c.area, c.switch_energy, c.leakage});
  }
  lib.validate();
  return lib;
}

CellLibrary load_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw library_error("cannot open library file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_library(buf.str(), path);
}

std::string serialize_library(const CellLibrary& lib) {
  std::ostringstream out;
  auto num = [](double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", d);
    return std::string(buf);
  };
  out << "name = " << lib.name() << "\n";
  out << "mode = " << (lib.mode() == LibraryMode::ideal ? "ideal" : "constrained") << "\n";
  out << "max_fanin = " << lib.max_fanin() << "\n";
  out << "units_time = " << lib.units_time << "\n";
  out << "units_area = " << lib.units_area << "\n";
  out << "units_energy = " << lib.units_energy << "\n";
  out << "ideal_delay_growth = " << num(lib.ideal_delay_growth) << "\n";
  for (const auto& [key, cell] : lib.cells()) {
    out << "[cell] kind=" << to_string(cell.kind) << " fanin=" << cell.fanin
        << " delay=" << num(cell.delay) << " area=" << num(cell.area)
        << " switch_energy=" << num(cell.switch_energy) << " leakage=" << num(cell.leakage)
        << "\n";
  }
  return out.str();
}

}  // namespace clakit
