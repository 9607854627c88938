#include "clakit/genarch.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>

namespace clakit {

const char* to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::RCA: return "rca";
    case SegmentKind::CCLA: return "ccla";
    case SegmentKind::SCBCLA: return "scbcla";
  }
  return "?";
}

const char* to_string(GeneratorStyle style) {
  return style == GeneratorStyle::basic ? "basic" : "decomposed";
}

unsigned AdderSpec::total_width() const {
  unsigned n = 0;
  for (const auto& s : segments) n += s.width;
  return n;
}

namespace {

std::string idx(const std::string& base, unsigned i) { return base + std::to_string(i); }

/// Per-segment emission context: net names get `prefix`, tags get
/// `tag_prefix`, so composed adders stay cross-referenceable.
struct Builder {
  Netlist& nl;
  const CellLibrary& lib;
  std::string prefix;
  std::string tag_prefix;

  std::string net_name(const std::string& base) const { return prefix + base; }

  NetId gate(CellKind kind, std::vector<NetId> inputs, const std::string& out_base,
             const std::string& tag, bool global_name = false) {
    Cell cell = lib.lookup(kind, static_cast<unsigned>(inputs.size()));
    return nl.add_gate(cell, std::move(inputs), global_name ? out_base : net_name(out_base),
                       tag_prefix + tag);
  }

  bool usable(CellKind kind, unsigned fanin) const {
    if (fanin > lib.max_fanin()) return false;
    if (lib.mode() == LibraryMode::ideal && (kind == CellKind::AND || kind == CellKind::OR))
      return true;
    return lib.has_cell(kind, fanin);
  }

  /// Widest-first reduction bounded by the library fan-in limit.  The
  /// final gate drives `out_base`; intermediate levels get _t<level>_<k>
  /// suffixes.
  NetId reduce(CellKind kind, std::vector<NetId> ops, const std::string& out_base,
               const std::string& tag, bool global_name = false) {
    assert(!ops.empty());
    if (ops.size() == 1) return ops[0];
    unsigned level = 0;
    while (ops.size() > 1) {
      std::vector<NetId> next;
      unsigned chunk = 0;
      for (size_t at = 0; at < ops.size();) {
        size_t remaining = ops.size() - at;
        if (remaining == 1) {  // odd operand rides up a level
          next.push_back(ops[at]);
          break;
        }
        unsigned take = static_cast<unsigned>(std::min<size_t>(lib.max_fanin(), remaining));
        while (take > 2 && !usable(kind, take)) --take;
        std::vector<NetId> ins(ops.begin() + at, ops.begin() + at + take);
        bool is_final = (at == 0 && take == remaining);
        std::string name = is_final ? out_base
                                    : out_base + "_t" + std::to_string(level) + "_" +
                                          std::to_string(chunk);
        next.push_back(gate(kind, std::move(ins), name, tag, global_name && is_final));
        at += take;
        ++chunk;
      }
      ops = std::move(next);
      ++level;
    }
    return ops[0];
  }
};

struct PgNets {
  std::vector<NetId> p, g;
};

PgNets emit_pg(Builder& b, const std::vector<NetId>& a, const std::vector<NetId>& bb) {
  PgNets pg;
  for (size_t i = 0; i < a.size(); ++i) {
    pg.g.push_back(b.gate(CellKind::AND, {a[i], bb[i]}, idx("G", i), idx("pg.and.", i)));
    pg.p.push_back(b.gate(CellKind::XOR, {a[i], bb[i]}, idx("P", i), idx("pg.xor.", i)));
  }
  return pg;
}

/// Product groups and carries of the factored generator.  Prefix
/// propagate products are cached so wider carries reuse the chunks of
/// narrower ones; every carry output is one AO21 (M, C0, N), the only
/// gate the carry input ever reaches.
std::vector<NetId> emit_decomposed_carries(Builder& b, const std::vector<NetId>& p,
                                           const std::vector<NetId>& g, NetId c0, bool only_last,
                                           const std::string& last_name, const std::string& role) {
  const unsigned m = static_cast<unsigned>(p.size());
  std::map<std::pair<unsigned, unsigned>, NetId> products;  // (lo, len) over p

  std::function<NetId(unsigned, unsigned)> product = [&](unsigned lo, unsigned len) -> NetId {
    if (len == 1) return p[lo];
    auto key = std::make_pair(lo, len);
    if (auto it = products.find(key); it != products.end()) return it->second;
    std::string name = lo == 0 ? "M" + std::to_string(len)
                               : "PP" + std::to_string(lo + len - 1) + "_" + std::to_string(lo);
    const unsigned chunk = b.lib.max_fanin();
    std::vector<NetId> ops;  // most significant operand first
    if (len <= chunk) {
      for (unsigned i = lo + len; i-- > lo;) ops.push_back(p[i]);
    } else {
      // lo-aligned chunks, so wider prefixes reuse narrower ones
      unsigned full = len / chunk;
      unsigned rem = len % chunk;
      if (rem) ops.push_back(product(lo + full * chunk, rem));
      for (unsigned j = full; j-- > 0;) ops.push_back(product(lo + j * chunk, chunk));
    }
    NetId out = b.reduce(CellKind::AND, std::move(ops), name, role + ".m");
    products.emplace(key, out);
    return out;
  };

  std::vector<NetId> carries;
  for (unsigned k = only_last ? m : 1; k <= m; ++k) {
    const unsigned i = k - 1;
    NetId m_net = product(0, k);
    NetId n_net;
    if (k == 1) {
      n_net = g[0];
    } else {
      std::vector<NetId> terms{g[i]};
      for (unsigned j = i; j-- > 0;) {
        std::vector<NetId> ops;
        for (unsigned t = i; t > j; --t) ops.push_back(p[t]);
        ops.push_back(g[j]);
        terms.push_back(b.reduce(CellKind::AND, std::move(ops),
                                 "T" + std::to_string(k) + "_" + std::to_string(j),
                                 role + ".term"));
      }
      n_net = b.reduce(CellKind::OR, std::move(terms), "N" + std::to_string(k), role + ".n");
    }
    bool final_carry = (k == m);
    carries.push_back(b.gate(CellKind::AO21, {m_net, c0, n_net},
                             final_carry ? last_name : "C" + std::to_string(k),
                             role + ".ao21.c" + std::to_string(k), final_carry));
  }
  return carries;
}

/// Flat two-level sum-of-products per carry.  The top-level OR is
/// resolved before the product gates so a constrained library reports
/// the missing wide OR the equations call for.
std::vector<NetId> emit_basic_carries(Builder& b, const std::vector<NetId>& p,
                                      const std::vector<NetId>& g, NetId c0, bool only_last,
                                      const std::string& last_name, const std::string& role) {
  const unsigned m = static_cast<unsigned>(p.size());
  std::vector<NetId> carries;
  for (unsigned k = only_last ? m : 1; k <= m; ++k) {
    const unsigned i = k - 1;
    Cell or_cell = b.lib.lookup(CellKind::OR, k + 1);
    std::vector<NetId> terms{g[i]};
    for (unsigned j = i; j-- > 0;) {
      std::vector<NetId> ops;
      for (unsigned t = i; t > j; --t) ops.push_back(p[t]);
      ops.push_back(g[j]);
      Cell and_cell = b.lib.lookup(CellKind::AND, static_cast<unsigned>(ops.size()));
      terms.push_back(b.nl.add_gate(and_cell, std::move(ops),
                                    b.net_name("T" + std::to_string(k) + "_" + std::to_string(j)),
                                    b.tag_prefix + role + ".and"));
    }
    std::vector<NetId> cin_ops;
    for (unsigned t = i + 1; t-- > 0;) cin_ops.push_back(p[t]);
    cin_ops.push_back(c0);
    Cell cin_cell = b.lib.lookup(CellKind::AND, static_cast<unsigned>(cin_ops.size()));
    terms.push_back(b.nl.add_gate(cin_cell, std::move(cin_ops),
                                  b.net_name("T" + std::to_string(k) + "_cin"),
                                  b.tag_prefix + role + ".and"));
    bool final_carry = (k == m);
    carries.push_back(b.nl.add_gate(
        or_cell, std::move(terms),
        final_carry ? last_name : b.net_name("C" + std::to_string(k)),
        b.tag_prefix + role + ".or.c" + std::to_string(k)));
  }
  return carries;
}

std::vector<NetId> emit_carries(Builder& b, GeneratorStyle style, const std::vector<NetId>& p,
                                const std::vector<NetId>& g, NetId c0, bool only_last,
                                const std::string& last_name, const std::string& role) {
  return style == GeneratorStyle::basic
             ? emit_basic_carries(b, p, g, c0, only_last, last_name, role)
             : emit_decomposed_carries(b, p, g, c0, only_last, last_name, role);
}

struct SegmentPorts {
  std::vector<NetId> sums;
  NetId cout = 0;
};

SegmentPorts emit_ccla(Builder& b, const std::vector<NetId>& a, const std::vector<NetId>& bb,
                       NetId cin, GeneratorStyle style, unsigned offset,
                       const std::string& cout_name) {
  PgNets pg = emit_pg(b, a, bb);
  std::vector<NetId> carries = emit_carries(b, style, pg.p, pg.g, cin, false, cout_name, "clg");
  SegmentPorts ports;
  for (size_t i = 0; i < a.size(); ++i) {
    NetId carry = i == 0 ? cin : carries[i - 1];
    ports.sums.push_back(b.gate(CellKind::XOR, {pg.p[i], carry}, idx("Sum", offset + i),
                                idx("sum.xor.", i), /*global_name=*/true));
  }
  ports.cout = carries.back();
  return ports;
}

SegmentPorts emit_scbcla(Builder& b, const std::vector<NetId>& a, const std::vector<NetId>& bb,
                         NetId cin, GeneratorStyle style, unsigned offset,
                         const std::string& cout_name) {
  PgNets pg = emit_pg(b, a, bb);
  // Section carry from the lookahead path; sums from an internal ripple.
  NetId cout = emit_carries(b, style, pg.p, pg.g, cin, true, cout_name, "sclg").back();
  SegmentPorts ports;
  NetId carry = cin;
  for (size_t i = 0; i < a.size(); ++i) {
    ports.sums.push_back(b.gate(CellKind::XOR, {pg.p[i], carry}, idx("Sum", offset + i),
                                idx("sum.xor.", i), /*global_name=*/true));
    if (i + 1 < a.size())
      carry = b.gate(CellKind::AO21, {pg.p[i], carry, pg.g[i]}, idx("RC", i + 1),
                     idx("ripple.ao21.", i + 1));
  }
  ports.cout = cout;
  return ports;
}

SegmentPorts emit_rca(Builder& b, const std::vector<NetId>& a, const std::vector<NetId>& bb,
                      NetId cin, unsigned offset, const std::string& cout_name) {
  SegmentPorts ports;
  NetId carry = cin;
  for (size_t i = 0; i < a.size(); ++i) {
    NetId g = b.gate(CellKind::AND, {a[i], bb[i]}, idx("G", i), idx("rca.g.", i));
    NetId p = b.gate(CellKind::XOR, {a[i], bb[i]}, idx("P", i), idx("rca.p.", i));
    ports.sums.push_back(b.gate(CellKind::XOR, {p, carry}, idx("Sum", offset + i),
                                idx("rca.sum.", i), /*global_name=*/true));
    bool last = (i + 1 == a.size());
    carry = b.gate(CellKind::AO21, {p, carry, g}, last ? cout_name : idx("C", i + 1),
                   idx("rca.carry.", i + 1), last);
  }
  ports.cout = carry;
  return ports;
}

void check_width(unsigned width) {
  if (width == 0) throw build_error("segment width must be at least 1");
}

/// Shared skeleton for the P/G-port fragments.
Netlist build_generator_fragment(unsigned width, LibraryRef lib, const std::string& name,
                                 GeneratorStyle style, bool only_last, const std::string& role) {
  check_width(width);
  Netlist nl(name, std::move(lib));
  Builder b{nl, nl.library(), "", ""};
  std::vector<NetId> p, g;
  for (unsigned i = 0; i < width; ++i) p.push_back(nl.add_input(idx("P", i)));
  for (unsigned i = 0; i < width; ++i) g.push_back(nl.add_input(idx("G", i)));
  NetId c0 = nl.add_input("C0");
  std::vector<NetId> carries =
      emit_carries(b, style, p, g, c0, only_last, "C" + std::to_string(width), role);
  for (NetId c : carries) nl.mark_output(c);
  return nl;
}

}  // namespace

Netlist build_pg(unsigned width, LibraryRef lib) {
  check_width(width);
  Netlist nl("pg" + std::to_string(width), std::move(lib));
  Builder b{nl, nl.library(), "", ""};
  std::vector<NetId> a, bb;
  for (unsigned i = 0; i < width; ++i) a.push_back(nl.add_input(idx("A", i)));
  for (unsigned i = 0; i < width; ++i) bb.push_back(nl.add_input(idx("B", i)));
  PgNets pg = emit_pg(b, a, bb);
  for (NetId n : pg.p) nl.mark_output(n);
  for (NetId n : pg.g) nl.mark_output(n);
  return nl;
}

Netlist build_basic_clg(unsigned width, LibraryRef lib) {
  return build_generator_fragment(width, std::move(lib),
                                  "clg" + std::to_string(width) + "_basic",
                                  GeneratorStyle::basic, false, "clg");
}

Netlist build_decomposed_clg(unsigned width, LibraryRef lib) {
  return build_generator_fragment(width, std::move(lib),
                                  "clg" + std::to_string(width) + "_decomposed",
                                  GeneratorStyle::decomposed, false, "clg");
}

Netlist build_basic_sclg(unsigned width, LibraryRef lib) {
  return build_generator_fragment(width, std::move(lib),
                                  "sclg" + std::to_string(width) + "_basic",
                                  GeneratorStyle::basic, true, "sclg");
}

Netlist build_decomposed_sclg(unsigned width, LibraryRef lib) {
  return build_generator_fragment(width, std::move(lib),
                                  "sclg" + std::to_string(width) + "_decomposed",
                                  GeneratorStyle::decomposed, true, "sclg");
}

Netlist build_adder(const AdderSpec& spec, LibraryRef lib) {
  if (spec.segments.empty()) throw build_error("adder spec has no segments");
  for (const auto& s : spec.segments) check_width(s.width);
  const unsigned n = spec.total_width();

  Netlist nl(spec.name.empty() ? "adder" + std::to_string(n) : spec.name, std::move(lib));
  std::vector<NetId> a, bb;
  for (unsigned i = 0; i < n; ++i) a.push_back(nl.add_input(idx("A", i)));
  for (unsigned i = 0; i < n; ++i) bb.push_back(nl.add_input(idx("B", i)));
  NetId cin = nl.add_input("Cin");

  std::vector<NetId> sums(n);
  NetId carry = cin;
  unsigned offset = 0;
  const bool composed = spec.segments.size() > 1;
  for (size_t k = 0; k < spec.segments.size(); ++k) {
    const SegmentSpec& seg = spec.segments[k];
    Builder b{nl, nl.library(),
              composed ? "u" + std::to_string(k) + "_" : "",
              composed ? "u" + std::to_string(k) + "." : ""};
    std::vector<NetId> sa(a.begin() + offset, a.begin() + offset + seg.width);
    std::vector<NetId> sb(bb.begin() + offset, bb.begin() + offset + seg.width);
    bool last = (k + 1 == spec.segments.size());
    std::string cout_name = last ? "Cout" : "C" + std::to_string(offset + seg.width);
    SegmentPorts ports;
    switch (seg.kind) {
      case SegmentKind::RCA:
        ports = emit_rca(b, sa, sb, carry, offset, cout_name);
        break;
      case SegmentKind::CCLA:
        ports = emit_ccla(b, sa, sb, carry, seg.style, offset, cout_name);
        break;
      case SegmentKind::SCBCLA:
        ports = emit_scbcla(b, sa, sb, carry, seg.style, offset, cout_name);
        break;
    }
    for (unsigned i = 0; i < seg.width; ++i) sums[offset + i] = ports.sums[i];
    carry = ports.cout;
    offset += seg.width;
  }

  for (NetId s : sums) nl.mark_output(s);
  nl.mark_output(carry);
  return nl;
}

Netlist build_rca(unsigned width, LibraryRef lib) {
  check_width(width);
  return build_adder(AdderSpec{"rca" + std::to_string(width),
                               {SegmentSpec{SegmentKind::RCA, width}}},
                     std::move(lib));
}

Netlist build_ccla_block(unsigned width, GeneratorStyle style, LibraryRef lib) {
  check_width(width);
  return build_adder(AdderSpec{"ccla" + std::to_string(width) + "_" + to_string(style),
                               {SegmentSpec{SegmentKind::CCLA, width, style}}},
                     std::move(lib));
}

Netlist build_scbcla_block(unsigned width, GeneratorStyle style, LibraryRef lib) {
  check_width(width);
  return build_adder(AdderSpec{"scbcla" + std::to_string(width) + "_" + to_string(style),
                               {SegmentSpec{SegmentKind::SCBCLA, width, style}}},
                     std::move(lib));
}

std::vector<AdderSpec> named_specs() {
  std::vector<AdderSpec> specs;
  for (SegmentKind kind : {SegmentKind::CCLA, SegmentKind::SCBCLA}) {
    const std::string flavor = to_string(kind);
    auto block = [kind](unsigned w) { return SegmentSpec{kind, w}; };
    auto rca = [](unsigned w) { return SegmentSpec{SegmentKind::RCA, w}; };
    auto repeat = [](std::vector<SegmentSpec> head, SegmentSpec seg, unsigned times,
                     std::vector<SegmentSpec> tail) {
      for (unsigned i = 0; i < times; ++i) head.push_back(seg);
      head.insert(head.end(), tail.begin(), tail.end());
      return head;
    };
    specs.push_back({"homogeneous-" + flavor, repeat({}, block(4), 8, {})});
    specs.push_back({"hybrid-" + flavor + "-1", repeat({rca(4)}, block(4), 7, {})});
    specs.push_back({"hybrid-" + flavor + "-2", repeat({rca(2), block(2)}, block(4), 7, {})});
    // The most significant nibble hosts the 3-bit block at bits 28..30
    // and the 1-bit RCA at bit 31.
    specs.push_back(
        {"hybrid-" + flavor + "-3", repeat({rca(2), block(2)}, block(4), 6, {block(3), rca(1)})});
    specs.push_back(
        {"hybrid-" + flavor + "-4", repeat({rca(2), block(2)}, block(4), 6, {block(2), rca(2)})});
  }
  return specs;
}

std::optional<AdderSpec> find_named_spec(std::string_view name) {
  for (auto& spec : named_specs())
    if (spec.name == name) return spec;
  return std::nullopt;
}

AdderSpec parse_adder_spec(std::string_view text, GeneratorStyle style) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  std::string_view spec_text = trim(text);
  if (auto named = find_named_spec(spec_text)) {
    for (auto& seg : named->segments)
      if (seg.kind != SegmentKind::RCA) seg.style = style;
    return *named;
  }

  AdderSpec spec;
  spec.name = std::string(spec_text);
  std::string_view rest = spec_text;
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) throw build_error("empty segment in adder spec '" + spec.name + "'");

    auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw build_error("segment '" + std::string(item) + "' must look like kind:width[*repeat]");
    std::string kind_s(trim(item.substr(0, colon)));
    std::string_view tail = trim(item.substr(colon + 1));
    unsigned repeat = 1;
    if (auto star = tail.find('*'); star != std::string_view::npos) {
      std::string rep_s(trim(tail.substr(star + 1)));
      tail = trim(tail.substr(0, star));
      try {
        repeat = static_cast<unsigned>(std::stoul(rep_s));
      } catch (const std::exception&) {
        throw build_error("bad repeat count '" + rep_s + "' in adder spec");
      }
    }
    unsigned width = 0;
    try {
      width = static_cast<unsigned>(std::stoul(std::string(tail)));
    } catch (const std::exception&) {
      throw build_error("bad width '" + std::string(tail) + "' in adder spec");
    }
    if (width == 0 || repeat == 0)
      throw build_error("segment widths and repeats must be positive in '" + spec.name + "'");

    SegmentKind kind;
    if (kind_s == "rca")
      kind = SegmentKind::RCA;
    else if (kind_s == "ccla")
      kind = SegmentKind::CCLA;
    else if (kind_s == "scbcla")
      kind = SegmentKind::SCBCLA;
    else
      throw build_error("unknown segment kind '" + kind_s + "' (want rca, ccla or scbcla)");

    for (unsigned r = 0; r < repeat; ++r)
      spec.segments.push_back(SegmentSpec{kind, width, style});
  }
  if (spec.segments.empty()) throw build_error("adder spec '" + spec.name + "' is empty");
  return spec;
}

}  // namespace clakit
