#include "pcdiff/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pcdiff/errors.hpp"

namespace pcdiff::sim {

namespace {

double parse_number(const std::string& s, std::size_t line) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError("trace line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void check(const HashrateTrace& t) {
  if (t.samples.empty()) throw ConfigError("hashrate trace is empty");
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    if (!(t.samples[i].relative_hashrate > 0)) throw ConfigError("trace hashrate must be positive");
    if (i && !(t.samples[i].unix_seconds > t.samples[i - 1].unix_seconds))
      throw ConfigError("trace times must be strictly increasing");
  }
}

}  // namespace

HashrateTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("hashrate trace is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "unix_seconds,relative_hashrate")
    throw ConfigError("trace header must be 'unix_seconds,relative_hashrate'");
  HashrateTrace t;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("trace line " + std::to_string(n) + ": expected two columns");
    t.samples.push_back({parse_number(line.substr(0, comma), n), parse_number(line.substr(comma + 1), n)});
  }
  check(t);
  return t;
}

HashrateTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file " + path);
  return read_trace_csv(in);
}

void write_trace_csv(std::ostream& out, const HashrateTrace& trace) {
  out << "unix_seconds,relative_hashrate\n";
  for (const auto& s : trace.samples) out << fmt(s.unix_seconds) << ',' << fmt(s.relative_hashrate) << '\n';
}

HashrateTrace constant_trace(double seconds) { return HashrateTrace{{{0, 1}, {seconds, 1}}}; }

HashrateTrace ramp_trace(double factor, double seconds, std::uint32_t steps) {
  if (steps == 0 || !(factor > 0) || !(seconds > 0)) throw ConfigError("ramp needs positive factor, length and steps");
  HashrateTrace t;
  for (std::uint32_t i = 0; i <= steps; ++i)
    t.samples.push_back({seconds * i / steps, 1.0 + (factor - 1.0) * i / steps});
  return t;
}

HashrateTrace step_trace(double factor, double at_seconds, double seconds) {
  if (!(factor > 0) || !(at_seconds > 0) || !(seconds >= at_seconds)) throw ConfigError("bad step trace");
  HashrateTrace t{{{0, 1}, {at_seconds, factor}}};
  if (seconds > at_seconds) t.samples.push_back({seconds, factor});
  return t;
}

std::vector<double> replay_trace(const HashrateTrace& trace, double round_interval, Round duration, double time_scale) {
  check(trace);
  if (!(round_interval > 0) || !(time_scale > 0)) throw ConfigError("round interval and time scale must be positive");
  const double t0 = trace.samples.front().unix_seconds;
  const double need = static_cast<double>(duration) * round_interval * time_scale;
  if (trace.samples.back().unix_seconds - t0 + 1e-9 * need < need)
    throw ConfigError("hashrate trace covers fewer seconds than the configured duration");
  const double base = trace.samples.front().relative_hashrate;
  std::vector<double> out(static_cast<std::size_t>(duration) + 1);
  std::size_t j = 0;
  for (Round r = 0; r <= duration; ++r) {
    double t = t0 + static_cast<double>(r) * round_interval * time_scale;
    while (j + 1 < trace.samples.size() && trace.samples[j + 1].unix_seconds <= t) ++j;
    out[r] = trace.samples[j].relative_hashrate / base;
  }
  return out;
}

}  // namespace pcdiff::sim
