#pragma once

#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "pcdiff/chain_view.hpp"
#include "pcdiff/validation.hpp"

namespace pcdiff::fruit {

// Chain 0 is the only block chain. Fruits are stored with kind Fruit:
// parent = block parent (heaviest tip when mined), pivot_ref = fruit parent.

class FruitTable {
 public:
  void set(BlockRef block, std::span<const BlockRef> fruits);
  std::span<const BlockRef> fruits(BlockRef block) const;
  // Blocks (on any branch) that include the fruit.
  std::span<const BlockRef> inclusions(BlockRef fruit) const;
  // True when some block in genesis..tip includes the fruit.
  bool included_in(const BlockStore& store, BlockRef fruit, BlockRef tip) const;

 private:
  std::vector<std::uint64_t> begin_{0};
  std::vector<BlockRef> flat_;
  std::unordered_map<BlockRef, std::vector<BlockRef>> included_by_;
};

BlockRef fruit_parent(const BlockStore& store, BlockRef fruit);

// fruit_parent is on genesis..tip and its timestamp >= r - R. Unknown fruit parent gives false.
bool is_recent(const BlockStore& store, BlockRef fruit, BlockRef chain_tip, std::int64_t r, std::int64_t recency);

// Unincluded fruits one miner knows about.
struct FruitPool {
  std::vector<BlockRef> fruits;
  void add(BlockRef f) { fruits.push_back(f); }
  // Drops fruits whose fruit parent is too old to ever be included again.
  void prune(const BlockStore& store, std::int64_t r, std::int64_t recency);
};

// Fruits an honest block extending `parent` at round r includes, in pool order.
std::vector<BlockRef> assemble_block(const BlockStore& store, const FruitTable& table, const FruitPool& pool,
                                     BlockRef parent, std::int64_t r, std::int64_t recency);

// Honest fruit parent: tip of the heaviest chain pruned by ell + 2*Delta rounds.
BlockRef honest_fruit_parent(const ChainView& view, std::int64_t ell, std::int64_t delta, std::int64_t now);

// Fruit validity on receipt: target follows its block parent (M1, scaled by the fruit ratio).
Verdict validate_fruit(const ChainView& view, BlockRef fruit);
// Block validity: every included fruit is known, recent and not already on the chain.
Verdict validate_fruit_block(const ChainView& view, const FruitTable& table, BlockRef b, std::int64_t recency);

// Difficulty share of fruits mined by `subset` among fruits included in blocks of genesis..tip
// whose timestamps fall in [window_begin, window_end]. Empty when no fruit difficulty is present.
std::optional<Rational> fairness_fraction(const BlockStore& store, const FruitTable& table, BlockRef tip,
                                          Round window_begin, Round window_end, const std::set<std::uint32_t>& subset);

}  // namespace pcdiff::fruit
