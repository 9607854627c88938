#include "clakit/logicsim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace clakit {

namespace {

uint8_t eval_gate(const GateInstance& g, const std::vector<uint8_t>& v) {
  const auto& in = g.inputs;
  switch (g.cell.kind) {
    case CellKind::INV:
      return !v[in[0]];
    case CellKind::BUF:
      return v[in[0]];
    case CellKind::AND:
    case CellKind::NAND: {
      uint8_t acc = 1;
      for (NetId i : in) acc &= v[i];
      return g.cell.kind == CellKind::AND ? acc : !acc;
    }
    case CellKind::OR:
    case CellKind::NOR: {
      uint8_t acc = 0;
      for (NetId i : in) acc |= v[i];
      return g.cell.kind == CellKind::OR ? acc : !acc;
    }
    case CellKind::XOR:
      return v[in[0]] ^ v[in[1]];
    case CellKind::XNOR:
      return !(v[in[0]] ^ v[in[1]]);
    case CellKind::AO21:
      return (v[in[0]] & v[in[1]]) | v[in[2]];
  }
  return 0;
}

/// Evaluation plan reused across vectors of one run.
struct Engine {
  const Netlist& nl;
  std::vector<uint32_t> order;
  std::vector<uint8_t> values;

  explicit Engine(const Netlist& nl) : nl(nl), order(topological_order(nl)), values(nl.net_count(), 0) {}

  void apply(const InputVector& pi_values) {
    const auto& pis = nl.primary_inputs();
    if (pi_values.size() != pis.size())
      throw sim_error("input vector has " + std::to_string(pi_values.size()) + " bits, netlist '" +
                      nl.name() + "' has " + std::to_string(pis.size()) + " primary inputs");
    for (size_t i = 0; i < pis.size(); ++i) values[pis[i]] = pi_values[i] ? 1 : 0;
    for (uint32_t gi : order) {
      const GateInstance& g = nl.gates()[gi];
      values[g.output] = eval_gate(g, values);
    }
  }

  std::vector<uint8_t> read_pos() const {
    std::vector<uint8_t> out;
    out.reserve(nl.primary_outputs().size());
    for (NetId po : nl.primary_outputs()) out.push_back(values[po]);
    return out;
  }
};

}  // namespace

std::vector<uint8_t> evaluate(const Netlist& nl, const InputVector& pi_values) {
  Engine e(nl);
  e.apply(pi_values);
  return e.read_pos();
}

std::vector<uint8_t> evaluate_all(const Netlist& nl, const InputVector& pi_values) {
  Engine e(nl);
  e.apply(pi_values);
  return e.values;
}

SimTrace run_sequence(const Netlist& nl, const std::vector<InputVector>& vectors, double period) {
  if (period <= 0) throw sim_error("period must be positive");
  Engine e(nl);
  SimTrace trace;
  trace.netlist_name = nl.name();
  trace.net_count_snapshot = nl.net_count();
  trace.vector_count = static_cast<unsigned>(vectors.size());
  trace.period = period;
  trace.toggles.assign(nl.net_count(), 0);
  trace.net_values.assign(nl.net_count(), {});
  for (auto& h : trace.net_values) h.reserve(vectors.size());

  std::vector<uint8_t> prev;
  for (size_t k = 0; k < vectors.size(); ++k) {
    e.apply(vectors[k]);
    trace.po_values.push_back(e.read_pos());
    for (NetId n = 0; n < nl.net_count(); ++n) {
      trace.net_values[n].push_back(e.values[n] != 0);
      if (k > 0 && e.values[n] != prev[n]) ++trace.toggles[n];
    }
    prev = e.values;
  }
  return trace;
}

// ---------------------------------------------------------------------------

AdderPortMap find_adder_ports(const Netlist& nl, unsigned width) {
  AdderPortMap ports;
  auto need = [&nl](const std::string& name) {
    auto id = nl.find_net(name);
    if (!id) throw sim_error("netlist '" + nl.name() + "' has no adder port '" + name + "'");
    return *id;
  };
  for (unsigned i = 0; i < width; ++i) ports.a.push_back(need("A" + std::to_string(i)));
  for (unsigned i = 0; i < width; ++i) ports.b.push_back(need("B" + std::to_string(i)));
  ports.cin = need("Cin");
  for (NetId pi : {ports.a[0], ports.b[0], ports.cin})
    if (!nl.is_primary_input(pi))
      throw sim_error("netlist '" + nl.name() + "': adder operand nets are not primary inputs");
  if (nl.primary_inputs().size() != 2 * width + 1)
    throw sim_error("netlist '" + nl.name() + "' has " +
                    std::to_string(nl.primary_inputs().size()) +
                    " primary inputs; a " + std::to_string(width) + "-bit adder needs " +
                    std::to_string(2 * width + 1));

  const auto& pos = nl.primary_outputs();
  auto po_index = [&](const std::string& name) -> size_t {
    NetId net = need(name);
    for (size_t i = 0; i < pos.size(); ++i)
      if (pos[i] == net) return i;
    throw sim_error("netlist '" + nl.name() + "': '" + name + "' is not a primary output");
  };
  for (unsigned i = 0; i < width; ++i)
    ports.sum_po_index.push_back(po_index("Sum" + std::to_string(i)));
  ports.cout_po_index = po_index("Cout");
  return ports;
}

std::string Counterexample::to_string(unsigned width) const {
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "A=0x%llx B=0x%llx Cin=%d -> got Sum=0x%llx Cout=%d, want Sum=0x%llx Cout=%d",
                static_cast<unsigned long long>(a), static_cast<unsigned long long>(b), cin ? 1 : 0,
                static_cast<unsigned long long>(got_sum), got_cout ? 1 : 0,
                static_cast<unsigned long long>(want_sum), want_cout ? 1 : 0);
  (void)width;
  return buf;
}

namespace {

struct AdderHarness {
  Engine engine;
  AdderPortMap ports;
  unsigned width;

  AdderHarness(const Netlist& nl, unsigned width)
      : engine(nl), ports(find_adder_ports(nl, width)), width(width) {}

  /// Returns false and fills cex when the netlist disagrees with
  /// (a + b + cin) mod 2^width / carry.
  bool check(uint64_t a, uint64_t b, bool cin, Counterexample& cex) {
    auto& v = engine.values;
    for (unsigned i = 0; i < width; ++i) {
      v[ports.a[i]] = (a >> i) & 1;
      v[ports.b[i]] = (b >> i) & 1;
    }
    v[ports.cin] = cin ? 1 : 0;
    for (uint32_t gi : engine.order) {
      const GateInstance& g = engine.nl.gates()[gi];
      v[g.output] = eval_gate(g, v);
    }
    uint64_t got_sum = 0;
    const auto& pos = engine.nl.primary_outputs();
    for (unsigned i = 0; i < width; ++i)
      got_sum |= static_cast<uint64_t>(v[pos[ports.sum_po_index[i]]]) << i;
    bool got_cout = v[pos[ports.cout_po_index]] != 0;

    const uint64_t mask = width >= 64 ? ~0ull : ((1ull << width) - 1);
    uint64_t full_a = a & mask, full_b = b & mask;
    uint64_t want_sum = (full_a + full_b + (cin ? 1 : 0)) & mask;
    bool want_cout;
    if (width >= 64) {
      // carry out of 64-bit addition
      uint64_t s = full_a + full_b;
      want_cout = s < full_a || (cin && s + 1 == 0);
    } else {
      want_cout = ((full_a + full_b + (cin ? 1 : 0)) >> width) != 0;
    }

    if (got_sum == want_sum && got_cout == want_cout) return true;
    cex = Counterexample{full_a, full_b, cin, got_sum, want_sum, got_cout, want_cout};
    return false;
  }
};

}  // namespace

VerifyResult verify_adder(const Netlist& nl, unsigned width, const VerifyMode& mode) {
  VerifyResult result;
  AdderHarness harness(nl, width);
  Counterexample cex;

  if (mode.kind == VerifyMode::Kind::exhaustive) {
    if (width > kMaxExhaustiveWidth)
      throw sim_error("exhaustive verification is capped at width " +
                      std::to_string(kMaxExhaustiveWidth) + " (2^" +
                      std::to_string(2 * width + 1) + " vectors requested); use random mode");
    const uint64_t lim = 1ull << width;
    for (uint64_t a = 0; a < lim; ++a)
      for (uint64_t b = 0; b < lim; ++b)
        for (int c = 0; c < 2; ++c) {
          ++result.vectors_run;
          if (!harness.check(a, b, c != 0, cex)) {
            result.pass = false;
            result.counterexample = cex;
            return result;
          }
        }
    return result;
  }

  std::mt19937_64 rng(mode.seed);
  const uint64_t mask = width >= 64 ? ~0ull : ((1ull << width) - 1);
  for (uint64_t k = 0; k < mode.count; ++k) {
    uint64_t a = rng() & mask;
    uint64_t b = rng() & mask;
    bool cin = (rng() & 1) != 0;
    ++result.vectors_run;
    if (!harness.check(a, b, cin, cex)) {
      result.pass = false;
      result.counterexample = cex;
      return result;
    }
  }
  return result;
}

std::vector<InputVector> random_adder_vectors(const Netlist& nl, unsigned width, uint64_t count,
                                              uint64_t seed) {
  AdderPortMap ports = find_adder_ports(nl, width);
  const auto& pis = nl.primary_inputs();
  std::vector<size_t> pi_slot(nl.net_count(), 0);
  for (size_t i = 0; i < pis.size(); ++i) pi_slot[pis[i]] = i;

  std::mt19937_64 rng(seed);
  const uint64_t mask = width >= 64 ? ~0ull : ((1ull << width) - 1);
  std::vector<InputVector> vectors;
  vectors.reserve(count);
  for (uint64_t k = 0; k < count; ++k) {
    uint64_t a = rng() & mask;
    uint64_t b = rng() & mask;
    bool cin = (rng() & 1) != 0;
    InputVector v(pis.size(), 0);
    for (unsigned i = 0; i < width; ++i) {
      v[pi_slot[ports.a[i]]] = (a >> i) & 1;
      v[pi_slot[ports.b[i]]] = (b >> i) & 1;
    }
    v[pi_slot[ports.cin]] = cin ? 1 : 0;
    vectors.push_back(std::move(v));
  }
  return vectors;
}

// ---------------------------------------------------------------------------
// VCD

namespace {

std::string vcd_id(size_t index) {
  // printable identifier alphabet per IEEE 1364
  std::string id;
  do {
    id += static_cast<char>('!' + index % 94);
    index /= 94;
  } while (index > 0);
  return id;
}

}  // namespace

std::string vcd_text(const SimTrace& trace, const Netlist& nl) {
  if (trace.net_count_snapshot != nl.net_count() || trace.netlist_name != nl.name())
    throw sim_error("trace was not produced from netlist '" + nl.name() + "'");

  // Integer timestamps: ns when the period is integral, ps otherwise.
  bool whole_ns = std::abs(trace.period - std::llround(trace.period)) < 1e-9;
  double scale = whole_ns ? 1.0 : 1000.0;
  const char* unit = whole_ns ? "ns" : "ps";

  std::ostringstream out;
  out << "$version clakit $end\n";
  out << "$timescale 1" << unit << " $end\n";
  out << "$scope module " << nl.name() << " $end\n";
  for (NetId n = 0; n < nl.net_count(); ++n)
    out << "$var wire 1 " << vcd_id(n) << " " << nl.net(n).name << " $end\n";
  out << "$upscope $end\n$enddefinitions $end\n";

  for (unsigned k = 0; k < trace.vector_count; ++k) {
    out << "#" << static_cast<long long>(std::llround(k * trace.period * scale)) << "\n";
    if (k == 0) {
      out << "$dumpvars\n";
      for (NetId n = 0; n < nl.net_count(); ++n)
        out << (trace.net_values[n][0] ? '1' : '0') << vcd_id(n) << "\n";
      out << "$end\n";
    } else {
      for (NetId n = 0; n < nl.net_count(); ++n)
        if (trace.net_values[n][k] != trace.net_values[n][k - 1])
          out << (trace.net_values[n][k] ? '1' : '0') << vcd_id(n) << "\n";
    }
  }
  return out.str();
}

void dump_vcd(const SimTrace& trace, const Netlist& nl, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw sim_error("cannot open '" + path + "' for writing");
  out << vcd_text(trace, nl);
  if (!out) throw sim_error("write to '" + path + "' failed");
}

}  // namespace clakit
