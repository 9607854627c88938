#include "clakit/timing.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace clakit {

namespace {

constexpr double kUnreached = -std::numeric_limits<double>::infinity();

std::string fmt(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", d);
  return buf;
}

}  // namespace

TimingReport analyze(const Netlist& nl) {
  TimingReport report;
  report.arrival.assign(nl.net_count(), 0.0);
  const auto order = topological_order(nl);
  const auto& gates = nl.gates();

  for (uint32_t gi : order) {
    const GateInstance& g = gates[gi];
    double worst = 0.0;
    for (NetId in : g.inputs) worst = std::max(worst, report.arrival[in]);
    report.arrival[g.output] = worst + g.cell.delay;
  }

  const auto& pos = nl.primary_outputs();
  report.per_output.reserve(pos.size());
  NetId critical_po = pos.empty() ? 0 : pos[0];
  for (NetId po : pos) {
    report.per_output.push_back(report.arrival[po]);
    if (report.arrival[po] > report.critical_delay) {
      report.critical_delay = report.arrival[po];
      critical_po = po;
    }
  }

  // Backtrack through max-arrival predecessors; ties resolved toward
  // primary inputs first, then the lowest-numbered driving gate.
  if (!pos.empty()) {
    std::vector<int32_t> drv = nl.drivers();
    NetId at = critical_po;
    while (drv[at] >= 0) {
      uint32_t gi = static_cast<uint32_t>(drv[at]);
      report.critical_path.push_back(gi);
      const GateInstance& g = gates[gi];
      NetId best = g.inputs[0];
      auto key = [&](NetId n) {
        return std::make_pair(-report.arrival[n], drv[n] < 0 ? int64_t{-1} : int64_t{drv[n]});
      };
      for (NetId in : g.inputs)
        if (key(in) < key(best)) best = in;
      at = best;
    }
    std::reverse(report.critical_path.begin(), report.critical_path.end());
  }
  return report;
}

double path_delay(const Netlist& nl, NetId from, NetId to) {
  std::vector<double> dist(nl.net_count(), kUnreached);
  dist[from] = 0.0;
  const auto order = topological_order(nl);
  const auto& gates = nl.gates();
  for (uint32_t gi : order) {
    const GateInstance& g = gates[gi];
    double worst = kUnreached;
    for (NetId in : g.inputs) worst = std::max(worst, dist[in]);
    if (worst != kUnreached)
      dist[g.output] = std::max(dist[g.output], worst + g.cell.delay);
  }
  if (dist[to] == kUnreached)
    throw timing_error("net '" + nl.net(to).name + "' is unreachable from '" +
                       nl.net(from).name + "'");
  return dist[to];
}

std::vector<RankEntry> rank_by_delay(
    const std::vector<std::pair<std::string, TimingReport>>& reports) {
  std::vector<RankEntry> ranking;
  ranking.reserve(reports.size());
  for (const auto& [name, report] : reports) ranking.push_back({name, report.critical_delay});
  std::sort(ranking.begin(), ranking.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.critical_delay != b.critical_delay) return a.critical_delay < b.critical_delay;
    return a.name < b.name;
  });
  return ranking;
}

std::string format_critical_path(const Netlist& nl, const TimingReport& report) {
  std::ostringstream out;
  if (report.critical_path.empty()) return "(empty path)";
  const GateInstance& first = nl.gates()[report.critical_path.front()];
  NetId start = first.inputs[0];
  auto key = [&](NetId n) { return std::make_pair(-report.arrival[n], nl.net(n).name); };
  for (NetId in : first.inputs)
    if (key(in) < key(start)) start = in;
  out << nl.net(start).name;
  for (uint32_t gi : report.critical_path) {
    const GateInstance& g = nl.gates()[gi];
    out << " -> " << (g.tag.empty() ? g.cell.name() : g.tag) << " (" << g.cell.name() << ", @"
        << fmt(report.arrival[g.output]) << ")";
  }
  NetId end = nl.gates()[report.critical_path.back()].output;
  out << " -> " << nl.net(end).name;
  return out.str();
}

std::string timing_report_json(const Netlist& nl, const TimingReport& report) {
  nlohmann::ordered_json j;
  j["netlist"] = nl.name();
  j["units_time"] = nl.library().units_time;
  j["critical_delay"] = report.critical_delay;
  nlohmann::ordered_json per_output = nlohmann::ordered_json::object();
  const auto& pos = nl.primary_outputs();
  for (size_t i = 0; i < pos.size(); ++i)
    per_output[nl.net(pos[i]).name] = report.per_output[i];
  j["per_output"] = std::move(per_output);
  nlohmann::ordered_json path = nlohmann::ordered_json::array();
  for (uint32_t gi : report.critical_path) {
    const GateInstance& g = nl.gates()[gi];
    path.push_back({{"gate", gi},
                    {"cell", g.cell.name()},
                    {"tag", g.tag},
                    {"output", nl.net(g.output).name},
                    {"arrival", report.arrival[g.output]}});
  }
  j["critical_path"] = std::move(path);
  return j.dump(2) + "\n";
}

}  // namespace clakit
