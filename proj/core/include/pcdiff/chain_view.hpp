#pragma once

#include <cstdint>
#include <vector>

#include "pcdiff/block.hpp"
#include "pcdiff/block_store.hpp"

namespace pcdiff {

// A chain as an ordered list genesis..tip.
using Chain = std::vector<BlockRef>;

// The subset of the store one party has accepted, with heaviest tips per chain.
class ChainView {
 public:
  explicit ChainView(const BlockStore& store);

  const BlockStore& store() const { return *store_; }
  bool contains(BlockRef b) const { return b < arrival_.size() && arrival_[b] != kNoBlock; }
  // Caller guarantees parent and references are already known.
  // Returns true when b becomes the heaviest tip of its chain.
  bool insert(BlockRef b);

  BlockRef tip(ChainId c) const { return tips_[c]; }
  const std::vector<BlockRef>& tips() const { return tips_; }
  std::uint32_t arrival(BlockRef b) const { return contains(b) ? arrival_[b] : kNoBlock; }
  std::uint32_t known_count() const { return next_arrival_; }
  Chain heaviest_chain(ChainId c) const { return store_->path(tips_[c]); }

 private:
  const BlockStore* store_;
  std::vector<std::uint32_t> arrival_;
  std::vector<BlockRef> tips_;
  std::uint32_t next_arrival_ = 0;
};

Rational chain_difficulty(const ChainView& view, const BlockId& tip);
Interval covered_interval(const ChainView& view, const BlockId& b);
BlockId heaviest_tip(const ChainView& view, ChainId chain);

// Longest shared prefix. Throws DomainError when the chains do not share a genesis.
Chain common_prefix(const Chain& a, const Chain& b);

// Drops the maximal suffix of blocks with timestamp > now - ell. Genesis is kept.
Chain prune_recent(const Chain& c, std::int64_t ell, std::int64_t now, const BlockStore& store);

}  // namespace pcdiff
