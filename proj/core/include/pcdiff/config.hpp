#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pcdiff/block.hpp"
#include "pcdiff/params.hpp"

namespace pcdiff::sim {

enum class ProtocolKind { Prism, Ohie, FruitChains, GenericParallel };
enum class StrategyKind { None, EpochDelayer, GenesisReferrer, DifficultyRaiser, PrivateMiner, StalePivotRef };
enum class TraceKind { Constant, Ramp, Step, File };

std::string_view to_string(ProtocolKind k);
std::string_view to_string(StrategyKind k);
std::string_view to_string(TraceKind k);

struct AdversarySpec {
  double fraction = 0;  // share of total hashrate
  StrategyKind strategy = StrategyKind::None;
  std::uint32_t attack_chain = 1;
  std::uint32_t confirm_depth = 6;  // k
  std::uint32_t release_delay = 0;  // rounds, at most Delta
  Round attack_start = 1;
  Rational attack_margin{3};        // StalePivotRef: X >= margin * (k+1) * honest difficulty
  std::uint32_t giveup_blocks = 20; // PrivateMiner: abandon when this many blocks behind
  bool stop_on_resolution = true;
  friend bool operator==(const AdversarySpec&, const AdversarySpec&) = default;
};

struct TraceSpec {
  TraceKind kind = TraceKind::Constant;
  double factor = 1;
  double step_fraction = 0.5;  // step position as a fraction of the run
  std::uint32_t steps = 100;
  std::string file;
  double time_scale = 1;
  friend bool operator==(const TraceSpec&, const TraceSpec&) = default;
};

struct MetricsSpec {
  std::uint32_t windows = 10;
  std::uint32_t sample_interval = 1000;
  bool record_rounds = false;
  std::vector<std::uint32_t> fairness_subset{0};
  Round fairness_begin = 0;  // 0 means r_wait
  Round fairness_end = 0;    // 0 means duration - r_wait
  friend bool operator==(const MetricsSpec&, const MetricsSpec&) = default;
};

struct SimConfig {
  ProtocolKind protocol = ProtocolKind::GenericParallel;
  bool enforce_m2 = true;
  ProtocolParams params;
  Rational block_rate{1, 10};   // blocks per second per chain; params.f = block_rate * round_interval
  Rational round_interval{2};   // seconds
  Round duration = 10000;
  std::uint32_t honest_nodes = 1;
  std::vector<double> node_weights;  // empty means equal
  std::uint64_t seed = 0;
  AdversarySpec adversary;
  TraceSpec trace;
  MetricsSpec metrics;

  // Total chain count including the pivot (params.m).
  std::uint32_t chain_count() const { return params.m; }
  // Rejects inconsistent settings with ConfigError.
  void validate() const;
  // Recomputes derived fields (params.f).
  void resolve();

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// Flat "key = value" lines grouped by [section]. '#' starts a comment.
SimConfig parse_config(std::istream& in, const std::string& base_dir = ".");
SimConfig load_config(const std::string& path);
// key=value with the flat key name, e.g. adversary_fraction=0.3
void apply_override(SimConfig& cfg, std::string_view assignment);
void write_config(std::ostream& out, const SimConfig& cfg);

}  // namespace pcdiff::sim
