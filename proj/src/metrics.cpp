#include "clakit/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "clakit/timing.hpp"

namespace clakit {

namespace {

std::string fmt(const char* spec, double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, d);
  return buf;
}

std::string csv_num(double d) { return std::isnan(d) ? "" : fmt("%.6g", d); }
std::string csv_fom(double d) { return std::isnan(d) ? "" : fmt("%.2f", d); }
std::string pct(double d) { return std::isnan(d) ? "-" : fmt("%.1f", d); }

double ratio_percent(double baseline, double candidate) {
  if (std::isnan(baseline) || std::isnan(candidate)) return std::nan("");
  return (candidate / baseline - 1.0) * 100.0;
}

}  // namespace

PowerReport estimate_power(const SimTrace& trace, const Netlist& nl) {
  if (trace.net_count_snapshot != nl.net_count() || trace.netlist_name != nl.name())
    throw metrics_error("trace was not produced from netlist '" + nl.name() + "'");
  if (trace.period <= 0) throw metrics_error("trace period must be positive");

  PowerReport report;
  report.unit = nl.library().units_energy + "/" + nl.library().units_time;

  if (trace.vector_count > 0) {
    std::vector<int32_t> drv = nl.drivers();
    double energy = 0.0;
    for (NetId n = 0; n < nl.net_count(); ++n)
      if (drv[n] >= 0) energy += static_cast<double>(trace.toggles[n]) *
                                 nl.gates()[drv[n]].cell.switch_energy;
    report.dynamic = energy / (trace.vector_count * trace.period);
  }
  for (const auto& g : nl.gates()) report.leakage += g.cell.leakage;
  report.total = report.dynamic + report.leakage;
  return report;
}

double compute_fom(double power, double delay, double area) {
  if (!(power > 0) || !(delay > 0) || !(area > 0))
    throw metrics_error("FOM needs positive power, delay and area");
  return 1e6 / (power * delay * area);
}

ComparisonRow compare(const MetricsReport& baseline, const MetricsReport& candidate) {
  auto units_clash = [](const std::string& a, const std::string& b) {
    return !a.empty() && !b.empty() && a != b;
  };
  if (units_clash(baseline.power_unit, candidate.power_unit) ||
      units_clash(baseline.time_unit, candidate.time_unit) ||
      units_clash(baseline.area_unit, candidate.area_unit))
    throw metrics_error("cannot compare '" + baseline.name + "' and '" + candidate.name +
                        "': unit mismatch");

  ComparisonRow row;
  row.baseline = baseline.name;
  row.candidate = candidate.name;
  row.power_delta_percent = ratio_percent(baseline.power, candidate.power);
  row.delay_delta_percent = ratio_percent(baseline.delay, candidate.delay);
  row.area_delta_percent = ratio_percent(baseline.area, candidate.area);
  row.fom_gain_percent = ratio_percent(baseline.fom, candidate.fom);
  if (std::isnan(baseline.delay) || std::isnan(candidate.delay)) {
    row.delay_reduction_percent = std::nan("");
    row.speedup_percent = std::nan("");
  } else {
    row.delay_reduction_percent = (1.0 - candidate.delay / baseline.delay) * 100.0;
    row.speedup_percent = (baseline.delay / candidate.delay - 1.0) * 100.0;
  }
  return row;
}

MetricsReport evaluate_design(const Netlist& nl, const std::vector<InputVector>& vectors,
                              double period) {
  MetricsReport report;
  report.name = nl.name();
  report.power_unit = nl.library().units_energy + "/" + nl.library().units_time;
  report.time_unit = nl.library().units_time;
  report.area_unit = nl.library().units_area;

  report.delay = analyze(nl).critical_delay;
  report.area = stats(nl).total_area;
  SimTrace trace = run_sequence(nl, vectors, period);
  report.power = estimate_power(trace, nl).total;
  report.fom = compute_fom(report.power, report.delay, report.area);
  return report;
}

std::string metrics_csv(const std::vector<MetricsReport>& rows) {
  std::ostringstream out;
  out << "name,power,delay,area,fom\n";
  for (const auto& r : rows)
    out << r.name << "," << csv_num(r.power) << "," << csv_num(r.delay) << "," << csv_num(r.area)
        << "," << csv_fom(r.fom) << "\n";
  return out.str();
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "baseline,candidate,power_delta_percent,delay_delta_percent,area_delta_percent,"
         "fom_gain_percent,delay_reduction_percent,speedup_percent\n";
  for (const auto& r : rows)
    out << r.baseline << "," << r.candidate << "," << pct(r.power_delta_percent) << ","
        << pct(r.delay_delta_percent) << "," << pct(r.area_delta_percent) << ","
        << pct(r.fom_gain_percent) << "," << pct(r.delay_reduction_percent) << ","
        << pct(r.speedup_percent) << "\n";
  return out.str();
}

std::string comparison_table(const ComparisonRow& row) {
  std::ostringstream out;
  out << "baseline : " << row.baseline << "\n";
  out << "candidate: " << row.candidate << "\n";
  out << "  power delta     : " << pct(row.power_delta_percent) << " %\n";
  out << "  delay delta     : " << pct(row.delay_delta_percent) << " %\n";
  out << "  area delta      : " << pct(row.area_delta_percent) << " %\n";
  out << "  FOM gain        : " << pct(row.fom_gain_percent) << " %\n";
  out << "  delay reduction : " << pct(row.delay_reduction_percent) << " %\n";
  out << "  speedup         : " << pct(row.speedup_percent) << " %\n";
  return out.str();
}

std::string fom_svg(const std::vector<MetricsReport>& rows) {
  const int bar_w = 64, gap = 24, chart_h = 240, margin = 48, label_h = 72;
  const int width = margin * 2 + static_cast<int>(rows.size()) * (bar_w + gap);
  const int height = margin + chart_h + label_h;

  double max_fom = 0.0;
  for (const auto& r : rows)
    if (!std::isnan(r.fom)) max_fom = std::max(max_fom, r.fom);
  if (max_fom <= 0) max_fom = 1.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "  <text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << "FOM (10^6 / power*delay*area)</text>\n";
  int x = margin;
  for (const auto& r : rows) {
    double f = std::isnan(r.fom) ? 0.0 : r.fom;
    int h = static_cast<int>(f / max_fom * chart_h + 0.5);
    int y = margin + chart_h - h;
    out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w << "\" height=\"" << h
        << "\" fill=\"#4878a8\"/>\n";
    out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << y - 6
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << fmt("%.2f", f) << "</text>\n";
    out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << margin + chart_h + 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\" transform=\""
        << "rotate(45 " << x + bar_w / 2 << " " << margin + chart_h + 14 << ")\">" << r.name
        << "</text>\n";
    x += bar_w + gap;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace clakit
