#pragma once

#include <string>
#include <vector>

#include "clakit/logicsim.hpp"
#include "clakit/netlist.hpp"

namespace clakit {

class metrics_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Activity-based power surrogate: toggles weighted by the driving
/// cell's switch energy, averaged over the simulated time window, plus
/// trace-independent leakage.
struct PowerReport {
  double dynamic = 0.0;
  double leakage = 0.0;
  double total = 0.0;
  std::string unit;  // energy unit per time unit, e.g. "fJ/ns" (= uW)
};

/// One row of the power/delay/area/FOM table.  Fields may be NaN when a
/// source (e.g. published prior-work numbers) only provides some of the
/// metrics.
struct MetricsReport {
  std::string name;
  double power = 0.0;
  double delay = 0.0;
  double area = 0.0;
  double fom = 0.0;
  std::string power_unit, time_unit, area_unit;
};

struct ComparisonRow {
  std::string baseline, candidate;
  double power_delta_percent = 0.0;  // (candidate/baseline - 1) * 100
  double delay_delta_percent = 0.0;
  double area_delta_percent = 0.0;
  double fom_gain_percent = 0.0;
  double delay_reduction_percent = 0.0;  // (1 - candidate/baseline) * 100
  double speedup_percent = 0.0;          // (baseline/candidate - 1) * 100
};

PowerReport estimate_power(const SimTrace& trace, const Netlist& nl);

/// 10^6 / (power * delay * area); throws metrics_error on nonpositive
/// inputs.
double compute_fom(double power, double delay, double area);

/// Percentage comparison of two rows.  Unit labels must agree where both
/// sides carry them; NaN metrics yield NaN percentages.
ComparisonRow compare(const MetricsReport& baseline, const MetricsReport& candidate);

/// Full pipeline for one design: critical delay, total area, activity
/// power over the vectors, and the FOM.
MetricsReport evaluate_design(const Netlist& nl, const std::vector<InputVector>& vectors,
                              double period);

// CSV / display / chart output.  Numeric formatting is fixed so repeated
// runs are byte-identical.
std::string metrics_csv(const std::vector<MetricsReport>& rows);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_table(const ComparisonRow& row);
std::string fom_svg(const std::vector<MetricsReport>& rows);

}  // namespace clakit
