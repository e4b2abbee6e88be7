#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pcdiff/block.hpp"
#include "pcdiff/epoch.hpp"
#include "pcdiff/params.hpp"
#include "pcdiff/rational.hpp"

namespace pcdiff {

struct Interval {
  Rational lo;  // exclusive
  Rational hi;  // inclusive
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct BlockDraft {
  BlockKind kind = BlockKind::Chain;
  ChainId chain = 0;
  BlockRef parent = kNoBlock;
  BlockRef pivot_ref = kNoBlock;  // fruits: the fruit parent
  Round timestamp = 0;
  Rational target;
  Miner miner;
};

// Append-only arena of every block produced in one execution, across all views.
// Holds the fields that do not depend on who is looking: height, chain difficulty,
// and for pivot blocks the difficulty schedule their children inherit.
class BlockStore {
 public:
  // chain_count tree chains (chain 0 is the pivot); fruits use chain id chain_count.
  BlockStore(std::uint32_t chain_count, const ProtocolParams& params, std::uint64_t id_salt);

  BlockRef add(const BlockDraft& draft);

  std::uint32_t chain_count() const { return chain_count_; }
  ChainId fruit_chain() const { return chain_count_; }
  std::size_t size() const { return chain_.size(); }
  const ProtocolParams& params() const { return params_; }
  std::uint64_t salt() const { return salt_; }

  BlockRef genesis(ChainId c) const { return c; }
  bool is_genesis(BlockRef b) const { return b < chain_count_; }

  BlockKind kind(BlockRef b) const { return kind_[b]; }
  ChainId chain(BlockRef b) const { return chain_[b]; }
  BlockRef parent(BlockRef b) const { return parent_[b]; }
  BlockRef pivot_ref(BlockRef b) const { return pivot_ref_[b]; }
  Round timestamp(BlockRef b) const { return timestamp_[b]; }
  std::uint32_t height(BlockRef b) const { return height_[b]; }
  const Rational& target(BlockRef b) const { return targets_[target_id_[b]]; }
  std::uint32_t target_id(BlockRef b) const { return target_id_[b]; }
  Rational difficulty(BlockRef b) const { return target(b).reciprocal(); }
  const Rational& chain_difficulty(BlockRef b) const { return chaindiff_[b]; }
  Interval covered_interval(BlockRef b) const;
  Miner miner(BlockRef b) const { return Miner{party_[b] & 0x7fffffffu, (party_[b] >> 31) != 0}; }
  BlockId id(BlockRef b) const { return BlockId::derive(salt_, b); }

  std::optional<BlockRef> find(const BlockId& id) const;
  BlockRef lookup(const BlockId& id) const;  // throws LookupError
  Block block(BlockRef b) const;

  // Target a child of pivot block b would carry (M1).
  const Rational& child_target(BlockRef pivot_block) const;
  diffadjust::EpochState epoch_state(BlockRef pivot_block) const;
  // Epoch index the children of pivot block b belong to.
  std::uint64_t child_epoch(BlockRef pivot_block) const { return height_[pivot_block] / params_.phi; }

  BlockRef ancestor_at(BlockRef b, std::uint32_t height) const;
  bool is_ancestor_or_self(BlockRef a, BlockRef b) const;
  // Blocks genesis..tip in order.
  std::vector<BlockRef> path(BlockRef tip) const;

 private:
  std::uint32_t intern_target(const Rational& t);

  std::uint32_t chain_count_;
  ProtocolParams params_;
  std::uint64_t salt_;

  std::vector<BlockKind> kind_;
  std::vector<ChainId> chain_;
  std::vector<BlockRef> parent_;
  std::vector<BlockRef> pivot_ref_;
  std::vector<Round> timestamp_;
  std::vector<std::uint32_t> height_;
  std::vector<std::uint32_t> target_id_;
  std::vector<std::uint32_t> party_;
  std::vector<std::uint32_t> local_;  // index into pivot epoch states, chain 0 only
  std::vector<Rational> chaindiff_;

  std::vector<Rational> targets_;
  std::map<Rational, std::uint32_t> target_index_;
  diffadjust::EpochTracker epochs_;
};

}  // namespace pcdiff
