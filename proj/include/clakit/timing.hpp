#pragma once

#include <string>
#include <vector>

#include "clakit/netlist.hpp"

namespace clakit {

class timing_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Static timing with fixed per-cell delays: arrival(PI) = 0,
/// arrival(gate output) = cell delay + max input arrival.
struct TimingReport {
  std::vector<double> arrival;          // per net
  std::vector<double> per_output;       // aligned with primary_outputs()
  double critical_delay = 0.0;
  std::vector<uint32_t> critical_path;  // gate indices, input side first
};

TimingReport analyze(const Netlist& nl);

/// Maximum-delay path from one net to another, counting the delays of
/// the gates traversed.  Throws timing_error when `to` is unreachable
/// from `from`.
double path_delay(const Netlist& nl, NetId from, NetId to);

struct RankEntry {
  std::string name;
  double critical_delay;
};

/// Ascending by delay, ties broken by name.
std::vector<RankEntry> rank_by_delay(const std::vector<std::pair<std::string, TimingReport>>& reports);

/// "A3 -> pg.xor.3 (XOR2, @1) -> ... -> Sum31" with cumulative arrivals.
std::string format_critical_path(const Netlist& nl, const TimingReport& report);

std::string timing_report_json(const Netlist& nl, const TimingReport& report);

}  // namespace clakit
