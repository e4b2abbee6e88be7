#include "pcdiff/chain_view.hpp"

#include "pcdiff/errors.hpp"

namespace pcdiff {

ChainView::ChainView(const BlockStore& store) : store_(&store) {
  tips_.resize(store.chain_count());
  for (ChainId c = 0; c < store.chain_count(); ++c) {
    insert(store.genesis(c));
    tips_[c] = store.genesis(c);
  }
}

bool ChainView::insert(BlockRef b) {
  if (contains(b)) return false;
  if (b >= arrival_.size()) arrival_.resize(std::max<std::size_t>(b + 1, arrival_.size() * 3 / 2 + 16), kNoBlock);
  arrival_[b] = next_arrival_++;
  if (store_->kind(b) != BlockKind::Chain) return false;
  ChainId c = store_->chain(b);
  if (store_->chain_difficulty(b) > store_->chain_difficulty(tips_[c])) {
    tips_[c] = b;
    return true;
  }
  return false;
}

namespace {

BlockRef view_lookup(const ChainView& view, const BlockId& id) {
  BlockRef b = view.store().lookup(id);
  if (!view.contains(b)) throw LookupError("block " + id.short_hex() + " is not in this view");
  return b;
}

}  // namespace

Rational chain_difficulty(const ChainView& view, const BlockId& tip) {
  return view.store().chain_difficulty(view_lookup(view, tip));
}

Interval covered_interval(const ChainView& view, const BlockId& b) {
  return view.store().covered_interval(view_lookup(view, b));
}

BlockId heaviest_tip(const ChainView& view, ChainId chain) {
  if (chain >= view.store().chain_count()) throw LookupError("chain id out of range");
  return view.store().id(view.tip(chain));
}

Chain common_prefix(const Chain& a, const Chain& b) {
  if (a.empty() || b.empty() || a.front() != b.front()) throw DomainError("chains do not share a genesis block");
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return Chain(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n));
}

Chain prune_recent(const Chain& c, std::int64_t ell, std::int64_t now, const BlockStore& store) {
  std::size_t keep = c.size();
  const std::int64_t bound = now - ell;
  while (keep > 1 && static_cast<std::int64_t>(store.timestamp(c[keep - 1])) > bound) --keep;
  return Chain(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(keep));
}

}  // namespace pcdiff
