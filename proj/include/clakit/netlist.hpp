#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clakit/celllib.hpp"

namespace clakit {

using NetId = uint32_t;

struct Net {
  std::string name;
};

/// A gate bound to a library cell.  inputs.size() must equal cell.fanin;
/// for AO21 the input order is (a, b, c) with output = (a*b)+c, i.e. the
/// two AND legs first and the OR leg last.
struct GateInstance {
  Cell cell;
  std::vector<NetId> inputs;
  NetId output;
  std::string tag;  // structural role, e.g. "clg.ao21.c2"
};

class netlist_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat combinational gate graph.  Built single-threaded through the
/// add_* calls; treated as immutable afterwards, so concurrent readers
/// (simulation, timing, export) are safe.
class Netlist {
 public:
  Netlist(std::string name, std::shared_ptr<const CellLibrary> lib);

  NetId add_input(const std::string& name);

  /// Returns the net with this name, creating it if needed.
  NetId ensure_net(const std::string& name);

  /// Adds a gate driving a fresh (or so-far undriven) net named
  /// output_name and returns that net.  Structural problems are not
  /// rejected here; validate() reports them.
  NetId add_gate(const Cell& cell, std::vector<NetId> inputs, const std::string& output_name,
                 std::string tag);

  void mark_output(NetId net);

  const std::string& name() const { return name_; }
  const CellLibrary& library() const { return *lib_; }
  const std::shared_ptr<const CellLibrary>& library_ptr() const { return lib_; }

  size_t net_count() const { return nets_.size(); }
  const Net& net(NetId id) const { return nets_[id]; }
  const std::vector<NetId>& primary_inputs() const { return pis_; }
  const std::vector<NetId>& primary_outputs() const { return pos_; }
  const std::vector<GateInstance>& gates() const { return gates_; }

  bool is_primary_input(NetId id) const { return is_pi_[id]; }
  std::optional<NetId> find_net(std::string_view name) const;

  /// Driver of each net: gate index, kPrimaryInput, or kUndriven.
  /// Nets driven more than once keep the first driver here; validate()
  /// reports the conflict.
  static constexpr int32_t kPrimaryInput = -1;
  static constexpr int32_t kUndriven = -2;
  std::vector<int32_t> drivers() const;

 private:
  std::string name_;
  std::shared_ptr<const CellLibrary> lib_;
  std::vector<Net> nets_;
  std::vector<bool> is_pi_;
  std::unordered_map<std::string, NetId> index_;
  std::vector<NetId> pis_;
  std::vector<NetId> pos_;
  std::vector<GateInstance> gates_;
};

// ---------------------------------------------------------------------------
// Structural validation

struct Violation {
  enum class Kind { cycle, undriven, multidriven, fanin_mismatch } kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate(const Netlist& nl);

/// Gate indices in evaluation order.  Requires a validated netlist;
/// throws netlist_error if no topological order exists.
std::vector<uint32_t> topological_order(const Netlist& nl);

/// Gates whose fan-in exceeds max (empty means compliant).
std::vector<uint32_t> audit_fanin(const Netlist& nl, unsigned max);

struct NetlistStats {
  std::map<std::string, size_t> gates_by_kind;  // keyed by cell name, e.g. "AND3"
  size_t gate_count = 0;
  double total_area = 0.0;
  size_t net_count = 0;
};

NetlistStats stats(const Netlist& nl);

// ---------------------------------------------------------------------------
// Export / import.  JSON is the canonical round-trip format; Verilog and
// DOT are one-way.

std::string export_verilog(const Netlist& nl);
std::string export_dot(const Netlist& nl);
std::string export_json(const Netlist& nl);

/// Parses the canonical JSON schema.  Cells are resolved against lib,
/// which must have the same name as the netlist was exported with.
Netlist import_json(const std::string& text, std::shared_ptr<const CellLibrary> lib);

}  // namespace clakit
