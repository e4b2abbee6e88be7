#include "pcdiff/ohie.hpp"

#include <algorithm>
#include <tuple>

#include "pcdiff/diffadjust.hpp"
#include "pcdiff/errors.hpp"

namespace pcdiff::ohie {

MetaTable::MetaTable(const BlockStore& store) {
  for (ChainId c = 0; c < store.chain_count(); ++c)
    set(store.genesis(c), OhieMeta{Rational(0), store.params().t0.reciprocal(), store.genesis(c), store.genesis(0)});
}

void MetaTable::set(BlockRef b, OhieMeta meta) {
  if (b >= meta_.size()) meta_.resize(std::max<std::size_t>(b + 1, meta_.size() * 3 / 2 + 16));
  meta_[b] = std::move(meta);
}

const OhieMeta& MetaTable::get(BlockRef b) const {
  if (!has(b)) throw LookupError("no rank metadata for block");
  return meta_[b];
}

BlockRef chain0_parent(const BlockStore& store, BlockRef b) {
  if (store.is_genesis(b)) return store.genesis(0);
  return store.chain(b) == 0 ? store.parent(b) : store.pivot_ref(b);
}

OhieMeta compute_rank(const MetaTable& table, BlockRef parent, const Rational& difficulty, BlockRef c0p,
                      std::span<const BlockRef> tips) {
  OhieMeta m;
  m.rank = table.get(parent).next_rank;
  m.next_rank = m.rank + difficulty;
  m.trailing_ref = parent;
  m.chain0_parent = c0p;
  for (BlockRef t : tips) {
    const Rational& nr = table.get(t).next_rank;
    if (nr > m.next_rank) {
      m.next_rank = nr;
      m.trailing_ref = t;
    }
  }
  return m;
}

Verdict validate_ohie_block(const ChainView& view, const MetaTable& table, BlockRef b, bool enforce_m2) {
  const BlockStore& store = view.store();
  if (!table.has(b)) return Verdict::RankMismatch;
  const OhieMeta& m = table.get(b);
  if (!view.contains(store.parent(b))) return Verdict::Pending;
  if (m.chain0_parent != chain0_parent(store, b)) return Verdict::TargetMismatch;
  if (!view.contains(m.chain0_parent)) return Verdict::Pending;
  if (m.trailing_ref >= store.size() || store.kind(m.trailing_ref) == BlockKind::Fruit || !table.has(m.trailing_ref))
    return Verdict::TrailingInvalid;
  if (!view.contains(m.trailing_ref)) return Verdict::Pending;

  Verdict base = diffadjust::check_difficulty_rules(view, b, enforce_m2);
  if (base != Verdict::Valid) return base;

  const OhieMeta& parent = table.get(store.parent(b));
  if (m.rank != parent.next_rank) return Verdict::RankMismatch;
  Rational own = m.rank + store.difficulty(b);
  const Rational& trailing = table.get(m.trailing_ref).next_rank;
  const Rational& expected = trailing > own ? trailing : own;
  if (m.next_rank != expected) return Verdict::RankMismatch;
  return Verdict::Valid;
}

Chain partially_confirmed(const ChainView& view, ChainId c, const PartialConfirmRule& rule) {
  Chain chain = view.heaviest_chain(c);
  if (const auto* kd = std::get_if<KDeep>(&rule)) {
    std::size_t drop = kd->k > 0 ? kd->k - 1 : 0;
    std::size_t keep = chain.size() > drop ? chain.size() - drop : 1;
    chain.resize(std::max<std::size_t>(keep, 1));
    return chain;
  }
  const auto& tr = std::get<TimeRule>(rule);
  return prune_recent(chain, tr.window, tr.now, view.store());
}

Scb generate_scb(const ChainView& view, const MetaTable& table, const PartialConfirmRule& rule) {
  const BlockStore& store = view.store();
  Scb out;
  std::vector<Chain> confirmed;
  for (ChainId c = 0; c < store.chain_count(); ++c) {
    confirmed.push_back(partially_confirmed(view, c, rule));
    out.y.push_back(table.get(confirmed.back().back()).next_rank);
  }
  out.confirm_bar = *std::min_element(out.y.begin(), out.y.end());
  for (const auto& chain : confirmed)
    for (BlockRef b : chain)
      if (table.get(b).rank < out.confirm_bar) out.blocks.push_back(b);
  std::sort(out.blocks.begin(), out.blocks.end(), [&](BlockRef a, BlockRef b) {
    const Rational& ra = table.get(a).rank;
    const Rational& rb = table.get(b).rank;
    if (ra != rb) return ra < rb;
    return store.chain(a) < store.chain(b);
  });
  return out;
}

}  // namespace pcdiff::ohie
