#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clakit/netlist.hpp"

namespace clakit {

class sim_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One input assignment, aligned with the netlist's primary input order.
using InputVector = std::vector<uint8_t>;

/// Settled-state trace of a vector sequence: zero-delay semantics, one
/// settled value per net per vector, toggles counted between consecutive
/// settled states only (no glitch activity).
struct SimTrace {
  std::string netlist_name;
  size_t net_count_snapshot = 0;
  unsigned vector_count = 0;
  double period = 0.0;
  std::vector<std::vector<uint8_t>> po_values;  // [vector][po]
  std::vector<uint64_t> toggles;                // per net
  std::vector<std::vector<bool>> net_values;    // [net][vector]
};

/// Evaluates every gate in topological order; returns the PO values.
std::vector<uint8_t> evaluate(const Netlist& nl, const InputVector& pi_values);

/// As evaluate(), but returns the settled value of every net.
std::vector<uint8_t> evaluate_all(const Netlist& nl, const InputVector& pi_values);

SimTrace run_sequence(const Netlist& nl, const std::vector<InputVector>& vectors, double period);

// ---------------------------------------------------------------------------
// Adder verification against integer arithmetic

struct AdderPortMap {
  std::vector<NetId> a, b;  // LSB first
  NetId cin;
  std::vector<size_t> sum_po_index;  // index into primary_outputs(), LSB first
  size_t cout_po_index = 0;
};

/// Resolves the A0.., B0.., Cin / Sum0.., Cout port shape; throws
/// sim_error if the netlist does not expose it.
AdderPortMap find_adder_ports(const Netlist& nl, unsigned width);

struct Counterexample {
  uint64_t a = 0, b = 0;
  bool cin = false;
  uint64_t got_sum = 0, want_sum = 0;
  bool got_cout = false, want_cout = false;
  std::string to_string(unsigned width) const;
};

struct VerifyResult {
  bool pass = true;
  uint64_t vectors_run = 0;
  std::optional<Counterexample> counterexample;
};

struct VerifyMode {
  enum class Kind { exhaustive, random } kind = Kind::exhaustive;
  uint64_t count = 0;
  uint64_t seed = 0;
  static VerifyMode exhaustive() { return {}; }
  static VerifyMode random(uint64_t count, uint64_t seed) {
    return {Kind::random, count, seed};
  }
};

/// Maximum width accepted for exhaustive verification (2^(2n+1) vectors).
inline constexpr unsigned kMaxExhaustiveWidth = 10;

VerifyResult verify_adder(const Netlist& nl, unsigned width, const VerifyMode& mode);

/// Deterministic adder stimulus in primary-input order, drawn from
/// mt19937_64(seed) as (a, b, cin) per vector.
std::vector<InputVector> random_adder_vectors(const Netlist& nl, unsigned width, uint64_t count,
                                              uint64_t seed);

// ---------------------------------------------------------------------------
// VCD

std::string vcd_text(const SimTrace& trace, const Netlist& nl);
void dump_vcd(const SimTrace& trace, const Netlist& nl, const std::string& path);

}  // namespace clakit
