#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pcdiff/block.hpp"

namespace pcdiff::sim {

struct TraceSample {
  double unix_seconds = 0;
  double relative_hashrate = 1;
};

// Step function of hashrate over wall-clock time.
struct HashrateTrace {
  std::vector<TraceSample> samples;
};

HashrateTrace read_trace_csv(std::istream& in);
HashrateTrace read_trace_file(const std::string& path);
void write_trace_csv(std::ostream& out, const HashrateTrace& trace);

HashrateTrace constant_trace(double seconds);
// Linear growth from 1 to `factor` emitted as `steps` equal steps over `seconds`.
HashrateTrace ramp_trace(double factor, double seconds, std::uint32_t steps);
// 1 until `at_seconds`, then `factor`.
HashrateTrace step_trace(double factor, double at_seconds, double seconds);

// Multiplier for rounds 0..duration. Round r sits at first_time + r * round_interval * time_scale
// on the trace clock. Normalized so round 0 has multiplier 1.
std::vector<double> replay_trace(const HashrateTrace& trace, double round_interval, Round duration, double time_scale = 1.0);

}  // namespace pcdiff::sim
