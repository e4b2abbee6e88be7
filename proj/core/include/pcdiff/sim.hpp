#pragma once

#include <functional>
#include <vector>

#include "pcdiff/config.hpp"
#include "pcdiff/event_log.hpp"
#include "pcdiff/trace.hpp"

namespace pcdiff::sim {

// State of every honest view at one round, handed to RunHooks::on_snapshot.
struct Snapshot {
  Round round = 0;
  const BlockStore* store = nullptr;
  std::vector<const ChainView*> honest_views;
  const prism::VoteTable* votes = nullptr;
  const fruit::FruitTable* fruits = nullptr;
  const ohie::MetaTable* ranks = nullptr;  // OHIE runs only
};

struct RunHooks {
  Round snapshot_interval = 0;  // 0 disables snapshots
  std::function<void(const Snapshot&)> on_snapshot;
};

// Hashrate multiplier for rounds 0..duration from the configured trace.
std::vector<double> hashrate_multipliers(const SimConfig& config);

// Runs rounds 1..duration (or until an attack resolves when configured to stop).
// Throws ConfigError for inconsistent configurations.
EventLog run(const SimConfig& config, const RunHooks& hooks = {});

}  // namespace pcdiff::sim
