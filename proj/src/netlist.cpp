#include "clakit/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <nlohmann/json.hpp>

namespace clakit {

Netlist::Netlist(std::string name, std::shared_ptr<const CellLibrary> lib)
    : name_(std::move(name)), lib_(std::move(lib)) {
  if (!lib_) throw netlist_error("netlist '" + name_ + "' needs a cell library");
}

NetId Netlist::add_input(const std::string& name) {
  if (index_.count(name))
    throw netlist_error("netlist '" + name_ + "': duplicate net name '" + name + "'");
  NetId id = ensure_net(name);
  is_pi_[id] = true;
  pis_.push_back(id);
  return id;
}

NetId Netlist::ensure_net(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  NetId id = static_cast<NetId>(nets_.size());
  nets_.push_back(Net{name});
  is_pi_.push_back(false);
  index_.emplace(name, id);
  return id;
}

NetId Netlist::add_gate(const Cell& cell, std::vector<NetId> inputs,
                        const std::string& output_name, std::string tag) {
  NetId out = ensure_net(output_name);
  gates_.push_back(GateInstance{cell, std::move(inputs), out, std::move(tag)});
  return out;
}

void Netlist::mark_output(NetId net) { pos_.push_back(net); }

std::optional<NetId> Netlist::find_net(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int32_t> Netlist::drivers() const {
  std::vector<int32_t> drv(nets_.size(), kUndriven);
  for (NetId pi : pis_) drv[pi] = kPrimaryInput;
  for (size_t g = 0; g < gates_.size(); ++g) {
    NetId out = gates_[g].output;
    if (drv[out] == kUndriven) drv[out] = static_cast<int32_t>(g);
  }
  return drv;
}

std::string ValidationReport::summary() const {
  if (ok()) return "pass";
  std::ostringstream out;
  out << violations.size() << " violation(s):";
  for (const auto& v : violations) out << "\n  - " << v.message;
  return out.str();
}

ValidationReport validate(const Netlist& nl) {
  ValidationReport report;
  auto add = [&report](Violation::Kind kind, std::string msg) {
    report.violations.push_back(Violation{kind, std::move(msg)});
  };

  const auto& gates = nl.gates();

  // Driver bookkeeping: count every source of every net.
  std::vector<unsigned> driver_count(nl.net_count(), 0);
  for (NetId pi : nl.primary_inputs()) ++driver_count[pi];
  for (const auto& g : gates) ++driver_count[g.output];

  for (NetId id = 0; id < nl.net_count(); ++id) {
    if (driver_count[id] > 1)
      add(Violation::Kind::multidriven,
          "net '" + nl.net(id).name + "' has " + std::to_string(driver_count[id]) + " drivers");
  }

  for (size_t gi = 0; gi < gates.size(); ++gi) {
    const GateInstance& g = gates[gi];
    if (g.inputs.size() != g.cell.fanin)
      add(Violation::Kind::fanin_mismatch,
          "gate #" + std::to_string(gi) + " (" + g.cell.name() + ", tag '" + g.tag + "') has " +
              std::to_string(g.inputs.size()) + " inputs, cell expects " +
              std::to_string(g.cell.fanin));
    for (NetId in : g.inputs) {
      if (driver_count[in] == 0)
        add(Violation::Kind::undriven,
            "gate #" + std::to_string(gi) + " input net '" + nl.net(in).name + "' is undriven");
    }
  }

  for (NetId po : nl.primary_outputs()) {
    if (driver_count[po] == 0)
      add(Violation::Kind::undriven, "primary output '" + nl.net(po).name + "' is undriven");
  }

  // Cycle check: Kahn over gates, counting input edges from gate-driven nets.
  std::vector<int32_t> drv = nl.drivers();
  std::vector<unsigned> waiting(gates.size(), 0);
  std::vector<std::vector<uint32_t>> consumers_of_gate(gates.size());
  for (size_t gi = 0; gi < gates.size(); ++gi) {
    for (NetId in : gates[gi].inputs) {
      int32_t d = drv[in];
      if (d >= 0) {
        ++waiting[gi];
        consumers_of_gate[d].push_back(static_cast<uint32_t>(gi));
      }
    }
  }
  std::vector<uint32_t> ready;
  for (size_t gi = 0; gi < gates.size(); ++gi)
    if (waiting[gi] == 0) ready.push_back(static_cast<uint32_t>(gi));
  size_t emitted = 0;
  for (size_t head = 0; head < ready.size(); ++head) {
    uint32_t gi = ready[head];
    ++emitted;
    for (uint32_t consumer : consumers_of_gate[gi])
      if (--waiting[consumer] == 0) ready.push_back(consumer);
  }
  if (emitted != gates.size()) {
    for (size_t gi = 0; gi < gates.size(); ++gi) {
      if (waiting[gi] > 0) {
        add(Violation::Kind::cycle,
            "gate #" + std::to_string(gi) + " (tag '" + gates[gi].tag + "') lies on a cycle");
        break;  // one representative is enough
      }
    }
  }

  return report;
}

std::vector<uint32_t> topological_order(const Netlist& nl) {
  const auto& gates = nl.gates();
  std::vector<int32_t> drv = nl.drivers();
  std::vector<unsigned> waiting(gates.size(), 0);
  std::vector<std::vector<uint32_t>> consumers(gates.size());
  for (size_t gi = 0; gi < gates.size(); ++gi) {
    for (NetId in : gates[gi].inputs) {
      if (drv[in] == Netlist::kUndriven)
        throw netlist_error("netlist '" + nl.name() + "': net '" + nl.net(in).name +
                            "' is undriven; validate() first");
      if (drv[in] >= 0) {
        ++waiting[gi];
        consumers[drv[in]].push_back(static_cast<uint32_t>(gi));
      }
    }
  }
  std::vector<uint32_t> order;
  order.reserve(gates.size());
  for (size_t gi = 0; gi < gates.size(); ++gi)
    if (waiting[gi] == 0) order.push_back(static_cast<uint32_t>(gi));
  for (size_t head = 0; head < order.size(); ++head)
    for (uint32_t consumer : consumers[order[head]])
      if (--waiting[consumer] == 0) order.push_back(consumer);
  if (order.size() != gates.size())
    throw netlist_error("netlist '" + nl.name() + "' contains a combinational cycle");
  return order;
}

std::vector<uint32_t> audit_fanin(const Netlist& nl, unsigned max) {
  std::vector<uint32_t> offenders;
  const auto& gates = nl.gates();
  for (size_t gi = 0; gi < gates.size(); ++gi)
    if (gates[gi].cell.fanin > max) offenders.push_back(static_cast<uint32_t>(gi));
  return offenders;
}

NetlistStats stats(const Netlist& nl) {
  NetlistStats s;
  s.net_count = nl.net_count();
  s.gate_count = nl.gates().size();
  for (const auto& g : nl.gates()) {
    ++s.gates_by_kind[g.cell.name()];
    s.total_area += g.cell.area;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Exports

namespace {

// Verilog identifier; net names may contain characters Verilog rejects.
std::string sanitize_id(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out.insert(out.begin(), '_');
  return out;
}

const char* port_letter(size_t i) {
  static const char* letters[] = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l",
                                  "m", "n", "o", "p", "q", "r", "s", "t", "u", "v", "w", "x"};
  return i < std::size(letters) ? letters[i] : "z";
}

}  // namespace

std::string export_verilog(const Netlist& nl) {
  std::ostringstream out;
  std::vector<std::string> id(nl.net_count());
  for (NetId n = 0; n < nl.net_count(); ++n) id[n] = sanitize_id(nl.net(n).name);

  out << "// " << nl.name() << " : structural netlist (library '" << nl.library().name()
      << "')\n";
  out << "module " << sanitize_id(nl.name()) << " (";
  bool first = true;
  for (NetId pi : nl.primary_inputs()) {
    out << (first ? "" : ", ") << id[pi];
    first = false;
  }
  for (NetId po : nl.primary_outputs()) {
    out << (first ? "" : ", ") << id[po];
    first = false;
  }
  out << ");\n";
  for (NetId pi : nl.primary_inputs()) out << "  input " << id[pi] << ";\n";
  for (NetId po : nl.primary_outputs()) out << "  output " << id[po] << ";\n";

  std::vector<bool> is_port(nl.net_count(), false);
  for (NetId pi : nl.primary_inputs()) is_port[pi] = true;
  for (NetId po : nl.primary_outputs()) is_port[po] = true;
  for (NetId n = 0; n < nl.net_count(); ++n)
    if (!is_port[n]) out << "  wire " << id[n] << ";\n";

  const auto& gates = nl.gates();
  for (size_t gi = 0; gi < gates.size(); ++gi) {
    const GateInstance& g = gates[gi];
    out << "  " << g.cell.name() << " g" << gi << " (";
    for (size_t i = 0; i < g.inputs.size(); ++i)
      out << "." << port_letter(i) << "(" << id[g.inputs[i]] << "), ";
    out << ".out(" << id[g.output] << "));";
    if (!g.tag.empty()) out << " // " << g.tag;
    out << "\n";
  }
  out << "endmodule\n";
  return out.str();
}

std::string export_dot(const Netlist& nl) {
  std::ostringstream out;
  out << "digraph \"" << nl.name() << "\" {\n  rankdir=LR;\n";
  for (NetId pi : nl.primary_inputs())
    out << "  \"pi_" << nl.net(pi).name << "\" [shape=triangle, label=\"" << nl.net(pi).name
        << "\"];\n";
  const auto& gates = nl.gates();
  for (size_t gi = 0; gi < gates.size(); ++gi)
    out << "  g" << gi << " [shape=box, label=\"" << gates[gi].cell.name() << "\\n"
        << gates[gi].tag << "\"];\n";
  for (NetId po : nl.primary_outputs())
    out << "  \"po_" << nl.net(po).name << "\" [shape=invtriangle, label=\"" << nl.net(po).name
        << "\"];\n";

  std::vector<int32_t> drv = nl.drivers();
  auto source = [&](NetId n) -> std::string {
    if (drv[n] >= 0) return "g" + std::to_string(drv[n]);
    return "\"pi_" + nl.net(n).name + "\"";
  };
  for (size_t gi = 0; gi < gates.size(); ++gi)
    for (NetId in : gates[gi].inputs)
      out << "  " << source(in) << " -> g" << gi << " [label=\"" << nl.net(in).name << "\"];\n";
  for (NetId po : nl.primary_outputs())
    out << "  " << source(po) << " -> \"po_" << nl.net(po).name << "\";\n";
  out << "}\n";
  return out.str();
}

std::string export_json(const Netlist& nl) {
  nlohmann::ordered_json j;
  j["name"] = nl.name();
  j["library"] = nl.library().name();
  auto names = [&nl](const std::vector<NetId>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (NetId id : ids) out.push_back(nl.net(id).name);
    return out;
  };
  j["pis"] = names(nl.primary_inputs());
  j["pos"] = names(nl.primary_outputs());
  j["gates"] = nlohmann::ordered_json::array();
  for (const auto& g : nl.gates()) {
    nlohmann::ordered_json jg;
    jg["kind"] = to_string(g.cell.kind);
    jg["fanin"] = g.cell.fanin;
    jg["inputs"] = names(g.inputs);
    jg["output"] = nl.net(g.output).name;
    jg["tag"] = g.tag;
    j["gates"].push_back(std::move(jg));
  }
  return j.dump(2) + "\n";
}

Netlist import_json(const std::string& text, std::shared_ptr<const CellLibrary> lib) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw netlist_error(std::string("netlist JSON parse error: ") + e.what());
  }
  try {
    std::string lib_name = j.at("library").get<std::string>();
    if (lib && lib_name != lib->name())
      throw netlist_error("netlist was exported with library '" + lib_name +
                          "', loaded library is '" + lib->name() + "'");
    Netlist nl(j.at("name").get<std::string>(), std::move(lib));
    for (const auto& pi : j.at("pis")) nl.add_input(pi.get<std::string>());
    // Outputs first so gate order in the file need not be topological.
    for (const auto& jg : j.at("gates")) nl.ensure_net(jg.at("output").get<std::string>());
    for (const auto& jg : j.at("gates")) {
      auto kind = cell_kind_from_string(jg.at("kind").get<std::string>());
      if (!kind)
        throw netlist_error("netlist JSON: unknown cell kind '" +
                            jg.at("kind").get<std::string>() + "'");
      Cell cell = nl.library().lookup(*kind, jg.at("fanin").get<unsigned>());
      std::vector<NetId> inputs;
      for (const auto& in : jg.at("inputs")) inputs.push_back(nl.ensure_net(in.get<std::string>()));
      nl.add_gate(cell, std::move(inputs), jg.at("output").get<std::string>(),
                  jg.value("tag", std::string{}));
    }
    for (const auto& po : j.at("pos")) {
      auto id = nl.find_net(po.get<std::string>());
      if (!id) throw netlist_error("netlist JSON: primary output '" + po.get<std::string>() +
                                   "' references no net");
      nl.mark_output(*id);
    }
    return nl;
  } catch (const nlohmann::json::exception& e) {
    throw netlist_error(std::string("netlist JSON schema error: ") + e.what());
  }
}

}  // namespace clakit
