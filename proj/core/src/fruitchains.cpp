#include "pcdiff/fruitchains.hpp"

#include <algorithm>

#include "pcdiff/diffadjust.hpp"
#include "pcdiff/errors.hpp"

namespace pcdiff::fruit {

void FruitTable::set(BlockRef block, std::span<const BlockRef> fruits) {
  if (block + 1 < begin_.size()) throw DomainError("fruits already recorded for this block");
  while (begin_.size() < static_cast<std::size_t>(block) + 1) begin_.push_back(flat_.size());
  flat_.insert(flat_.end(), fruits.begin(), fruits.end());
  begin_.push_back(flat_.size());
  for (BlockRef f : fruits) included_by_[f].push_back(block);
}

std::span<const BlockRef> FruitTable::fruits(BlockRef block) const {
  if (static_cast<std::size_t>(block) + 1 >= begin_.size()) return {};
  return std::span<const BlockRef>(flat_.data() + begin_[block], begin_[block + 1] - begin_[block]);
}

std::span<const BlockRef> FruitTable::inclusions(BlockRef fruit) const {
  auto it = included_by_.find(fruit);
  if (it == included_by_.end()) return {};
  return it->second;
}

bool FruitTable::included_in(const BlockStore& store, BlockRef fruit, BlockRef tip) const {
  for (BlockRef b : inclusions(fruit))
    if (store.is_ancestor_or_self(b, tip)) return true;
  return false;
}

BlockRef fruit_parent(const BlockStore& store, BlockRef fruit) {
  if (fruit >= store.size() || store.kind(fruit) != BlockKind::Fruit) throw LookupError("not a fruit");
  return store.pivot_ref(fruit);
}

bool is_recent(const BlockStore& store, BlockRef fruit, BlockRef chain_tip, std::int64_t r, std::int64_t recency) {
  if (fruit >= store.size() || store.kind(fruit) != BlockKind::Fruit) return false;
  BlockRef fp = store.pivot_ref(fruit);
  if (fp == kNoBlock || fp >= store.size()) return false;
  if (!store.is_ancestor_or_self(fp, chain_tip)) return false;
  return static_cast<std::int64_t>(store.timestamp(fp)) >= r - recency;
}

void FruitPool::prune(const BlockStore& store, std::int64_t r, std::int64_t recency) {
  std::erase_if(fruits, [&](BlockRef f) {
    return static_cast<std::int64_t>(store.timestamp(store.pivot_ref(f))) < r - recency;
  });
}

std::vector<BlockRef> assemble_block(const BlockStore& store, const FruitTable& table, const FruitPool& pool,
                                     BlockRef parent, std::int64_t r, std::int64_t recency) {
  std::vector<BlockRef> out;
  for (BlockRef f : pool.fruits) {
    if (!is_recent(store, f, parent, r, recency)) continue;
    if (table.included_in(store, f, parent)) continue;
    if (std::find(out.begin(), out.end(), f) != out.end()) continue;
    out.push_back(f);
  }
  return out;
}

BlockRef honest_fruit_parent(const ChainView& view, std::int64_t ell, std::int64_t delta, std::int64_t now) {
  // Same result as prune_recent on the heaviest chain, without materializing it.
  const BlockStore& store = view.store();
  const std::int64_t bound = now - (ell + 2 * delta);
  BlockRef b = view.tip(0);
  while (!store.is_genesis(b) && static_cast<std::int64_t>(store.timestamp(b)) > bound) b = store.parent(b);
  return b;
}

Verdict validate_fruit(const ChainView& view, BlockRef f) {
  const BlockStore& store = view.store();
  if (!view.contains(store.parent(f)) || !view.contains(store.pivot_ref(f))) return Verdict::Pending;
  if (store.target(f) != store.child_target(store.parent(f)) * store.params().fruit_ratio) return Verdict::FruitTarget;
  return Verdict::Valid;
}

Verdict validate_fruit_block(const ChainView& view, const FruitTable& table, BlockRef b, std::int64_t recency) {
  const BlockStore& store = view.store();
  auto fruits = table.fruits(b);
  for (BlockRef f : fruits) {
    if (f >= store.size() || store.kind(f) != BlockKind::Fruit) return Verdict::FruitParent;
    if (!view.contains(f)) return Verdict::Pending;
  }
  Verdict base = diffadjust::check_difficulty_rules(view, b, false);
  if (base != Verdict::Valid) return base;
  const BlockRef parent = store.parent(b);
  const auto r = static_cast<std::int64_t>(store.timestamp(b));
  for (std::size_t i = 0; i < fruits.size(); ++i) {
    BlockRef f = fruits[i];
    if (std::find(fruits.begin(), fruits.begin() + static_cast<std::ptrdiff_t>(i), f) != fruits.begin() + static_cast<std::ptrdiff_t>(i))
      return Verdict::FruitDuplicate;
    if (!is_recent(store, f, parent, r, recency)) return Verdict::FruitStale;
    if (table.included_in(store, f, parent)) return Verdict::FruitDuplicate;
  }
  return Verdict::Valid;
}

std::optional<Rational> fairness_fraction(const BlockStore& store, const FruitTable& table, BlockRef tip,
                                          Round window_begin, Round window_end, const std::set<std::uint32_t>& subset) {
  Rational total, mine;
  for (BlockRef b = tip;; b = store.parent(b)) {
    Round ts = store.timestamp(b);
    if (ts >= window_begin && ts <= window_end) {
      for (BlockRef f : table.fruits(b)) {
        Rational d = store.difficulty(f);
        Miner m = store.miner(f);
        if (subset.count(m.party)) mine += d;
        total += d;
      }
    }
    if (store.is_genesis(b)) break;
  }
  if (total.is_zero()) return std::nullopt;
  return mine / total;
}

}  // namespace pcdiff::fruit
