#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pcdiff/chain_view.hpp"
#include "pcdiff/event_log.hpp"

namespace pcdiff::analysis {

struct ForkCount {
  std::uint64_t on_chain = 0;
  std::uint64_t off_chain = 0;
};

// off / on; 0 when nothing is on chain.
Rational forking_rate(const ForkCount& count);

// Non-genesis tree blocks of chain c in the view, split by membership in c's heaviest chain.
ForkCount count_forks(const ChainView& view, ChainId c);
// Aggregated over every tree chain of the view.
Rational forking_rate(const ChainView& view);

struct ForkingWindow {
  Round begin = 0;  // inclusive, by block timestamp
  Round end = 0;    // exclusive, except the last window
  ForkCount count;
};

// Splits [0, end_round] into `windows` equal timestamp ranges.
std::vector<ForkingWindow> forking_series(const ChainView& view, Round end_round, std::uint32_t windows);

struct AdoptionDelays {
  // Delay in blocks of the non-pivot chain: 1 + old-epoch blocks stamped at or after the
  // boundary block and preceding the first new-epoch block.
  std::map<std::uint32_t, std::uint64_t> blocks;
  // Same transitions measured in time, rounded up to whole 1/f block intervals.
  std::map<std::uint32_t, std::uint64_t> intervals;
  std::uint64_t transitions = 0;  // (non-pivot chain, boundary) pairs considered
  std::uint64_t censored = 0;     // no new-epoch block on that chain before the run ended

  std::uint64_t samples() const;
  // Share of block-count samples in [lo, hi]; 0 when empty.
  double fraction_within(std::uint32_t lo, std::uint32_t hi) const;
};

// Transitions at every pivot block of height k*phi on the heaviest pivot chain.
AdoptionDelays epoch_adoption_delay(const ChainView& view, const Rational& f);

struct DifficultyChanges {
  std::uint64_t changes = 0;    // parent and child targets differ
  std::uint64_t mid_epoch = 0;  // changes where the child does not move to a later epoch
};

// Along the heaviest chain of c.
DifficultyChanges difficulty_changes(const ChainView& view, ChainId c);
double difficulty_change_frequency(const ChainView& view, ChainId c, double seconds);

struct ChainStats {
  ChainId chain = 0;
  ForkCount forks;
  DifficultyChanges changes;
  double changes_per_second = 0;
};

struct AttackCounts {
  std::uint64_t success = 0;
  std::uint64_t failure = 0;
  std::uint64_t unresolved = 0;
  std::uint64_t total() const { return success + failure + unresolved; }
};

AttackCounts attack_counts(const sim::EventLog& log);

struct FairnessReport {
  std::optional<Rational> fraction;
  Round begin = 0;
  Round end = 0;
  std::uint64_t honest_fruits = 0;
  std::uint64_t lost_fruits = 0;  // honest fruits old enough to be included but missing from the chain
};

FairnessReport fairness(const sim::EventLog& log, const ChainView& view);

struct MetricsReport {
  Round end_round = 0;
  double seconds = 0;
  ForkCount forks;
  Rational forking_rate;
  std::vector<ForkingWindow> forking_series;
  std::vector<sim::BandSample> band;
  AdoptionDelays adoption;
  std::vector<ChainStats> chains;
  std::optional<Rational> overhead;  // Prism only
  std::optional<FairnessReport> fairness;  // FruitChains only
  AttackCounts attacks;
  std::optional<sim::GoodRounds> good_rounds;
};

// Pure function of the log: the same log always gives the same report.
MetricsReport compute_metrics(const sim::EventLog& log);

}  // namespace pcdiff::analysis
