#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "pcdiff/block_store.hpp"
#include "pcdiff/chain_view.hpp"
#include "pcdiff/config.hpp"
#include "pcdiff/fruitchains.hpp"
#include "pcdiff/ohie.hpp"
#include "pcdiff/prism.hpp"

namespace pcdiff::sim {

enum class EventKind : std::uint8_t { Mine, Accept, Reject, Withhold, Release, Sample, Attack, GoodRounds, End };

std::string_view to_string(EventKind k);

enum class AttackResult : std::uint8_t { Failure = 0, Success = 1, Unresolved = 2 };

struct Event {
  Round round = 0;
  EventKind kind = EventKind::Mine;
  std::uint8_t code = 0;   // Verdict for Reject, AttackResult for Attack
  std::uint16_t node = 0;
  BlockRef block = kNoBlock;
  std::uint32_t aux = 0;   // index into samples for Sample
};

struct BandSample {
  Round round = 0;
  double multiplier = 1;
  Rational min_target;
  Rational max_target;
};

struct GoodRounds {
  std::uint64_t good = 0;
  std::uint64_t total = 0;
};

// Ids of a run's blocks are derived from this salt.
std::uint64_t id_salt(std::uint64_t seed);

// Everything one execution produced. Accept and Reject events are recorded for
// node 0, the reference view that metrics are computed on.
class EventLog {
 public:
  EventLog(const SimConfig& config);
  EventLog(EventLog&&) noexcept = default;
  EventLog& operator=(EventLog&&) noexcept = default;

  const SimConfig& config() const { return config_; }
  BlockStore& store() { return *store_; }
  const BlockStore& store() const { return *store_; }
  prism::VoteTable& votes() { return votes_; }
  const prism::VoteTable& votes() const { return votes_; }
  fruit::FruitTable& fruits() { return fruits_; }
  const fruit::FruitTable& fruits() const { return fruits_; }
  // Present for OHIE runs only.
  ohie::MetaTable* ranks() { return ranks_.get(); }
  const ohie::MetaTable* ranks() const { return ranks_.get(); }

  std::vector<Event> events;
  std::vector<BandSample> samples;
  std::optional<GoodRounds> good_rounds;
  Round end_round = 0;
  bool complete = false;

  // Node 0's view replayed from its Accept events.
  ChainView reference_view() const;
  std::size_t count(EventKind kind) const;

 private:
  SimConfig config_;
  std::unique_ptr<BlockStore> store_;
  prism::VoteTable votes_;
  fruit::FruitTable fruits_;
  std::unique_ptr<ohie::MetaTable> ranks_;
};

inline constexpr std::string_view kEventLogHeader =
    "round,event,block_id,chain,miner_class,target,parent,pivot_ref,timestamp,node,code,extra";

void write_event_log(std::ostream& out, const EventLog& log);
// Rebuilds the store and payload tables from Mine lines. Rejects logs without an end line.
EventLog read_event_log(std::istream& in, const SimConfig& config);

}  // namespace pcdiff::sim
