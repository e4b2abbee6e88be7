#pragma once

#include <span>
#include <variant>
#include <vector>

#include "pcdiff/chain_view.hpp"
#include "pcdiff/validation.hpp"

namespace pcdiff::ohie {

// Chains 0..m-1; chain 0 doubles as the pivot chain.

struct OhieMeta {
  Rational rank;
  Rational next_rank;
  BlockRef trailing_ref = kNoBlock;
  BlockRef chain0_parent = kNoBlock;
};

class MetaTable {
 public:
  explicit MetaTable(const BlockStore& store);
  void set(BlockRef b, OhieMeta meta);
  const OhieMeta& get(BlockRef b) const;
  bool has(BlockRef b) const { return b < meta_.size() && meta_[b].trailing_ref != kNoBlock; }

 private:
  std::vector<OhieMeta> meta_;
};

// Parent for chain-0 blocks, pivot reference otherwise; chain-0 genesis for every genesis.
BlockRef chain0_parent(const BlockStore& store, BlockRef b);

// rank = parent.next_rank; next_rank = max(rank + difficulty, max over tips of next_rank).
OhieMeta compute_rank(const MetaTable& table, BlockRef parent, const Rational& difficulty, BlockRef chain0_parent,
                      std::span<const BlockRef> tips);

Verdict validate_ohie_block(const ChainView& view, const MetaTable& table, BlockRef b, bool enforce_m2);

struct KDeep {
  std::uint32_t k = 1;  // the tip is 1-deep
};
struct TimeRule {
  std::int64_t window = 0;  // l + 2*Delta rounds
  std::int64_t now = 0;
};
using PartialConfirmRule = std::variant<KDeep, TimeRule>;

struct Scb {
  std::vector<BlockRef> blocks;  // ordered by (rank, chain)
  std::vector<Rational> y;       // per chain
  Rational confirm_bar;
};

Chain partially_confirmed(const ChainView& view, ChainId c, const PartialConfirmRule& rule);
Scb generate_scb(const ChainView& view, const MetaTable& table, const PartialConfirmRule& rule);

}  // namespace pcdiff::ohie
