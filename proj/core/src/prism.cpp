#include "pcdiff/prism.hpp"

#include <algorithm>

#include "pcdiff/diffadjust.hpp"
#include "pcdiff/errors.hpp"

namespace pcdiff::prism {

void VoteTable::set(BlockRef voter_block, std::span<const BlockRef> proposers) {
  if (voter_block + 1 < begin_.size()) throw DomainError("votes already recorded for this block");
  while (begin_.size() < static_cast<std::size_t>(voter_block) + 1) begin_.push_back(flat_.size());
  flat_.insert(flat_.end(), proposers.begin(), proposers.end());
  begin_.push_back(flat_.size());
}

std::span<const BlockRef> VoteTable::votes(BlockRef voter_block) const {
  if (static_cast<std::size_t>(voter_block) + 1 >= begin_.size()) return {};
  return std::span<const BlockRef>(flat_.data() + begin_[voter_block], begin_[voter_block + 1] - begin_[voter_block]);
}

Rational last_voted(const BlockStore& store, BlockRef voter_block) {
  if (store.is_genesis(voter_block)) return Rational(0);
  return store.chain_difficulty(store.pivot_ref(voter_block));
}

std::vector<BlockRef> honest_votes(const BlockStore& store, BlockRef parent, BlockRef proposer) {
  const Rational b0 = last_voted(store, parent);
  std::vector<BlockRef> out;
  if (store.chain_difficulty(proposer) <= b0) return out;
  BlockRef x = proposer;
  out.push_back(x);
  while (!store.is_genesis(x) && store.chain_difficulty(store.parent(x)) > b0) {
    x = store.parent(x);
    out.push_back(x);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

struct CandidateVote {
  Interval interval;
  BlockRef proposer;
};

Verdict check_votes(const ChainView& view, BlockRef b, const std::vector<CandidateVote>& votes, bool enforce_m2) {
  const BlockStore& store = view.store();
  for (const auto& v : votes) {
    if (v.proposer >= store.size()) return Verdict::NotProposer;
    if (!view.contains(v.proposer)) return Verdict::Pending;
    if (store.kind(v.proposer) == BlockKind::Fruit || store.chain(v.proposer) != 0) return Verdict::NotProposer;
  }
  Verdict base = diffadjust::check_difficulty_rules(view, b, enforce_m2);
  if (base != Verdict::Valid) return base;
  for (const auto& v : votes)
    if (v.interval != store.covered_interval(v.proposer)) return Verdict::VoteMismatch;

  const Rational b0 = last_voted(store, store.parent(b));
  const Rational& target_end = store.chain_difficulty(store.pivot_ref(b));
  const Rational* prev = &b0;
  for (const auto& v : votes) {
    if (!(v.interval.lo <= *prev && *prev < v.interval.hi)) return Verdict::VoteGap;
    prev = &v.interval.hi;
  }
  if (*prev != target_end) return Verdict::VoteTerminus;
  return Verdict::Valid;
}

}  // namespace

Verdict validate_voter_block(const ChainView& view, const VoteTable& table, BlockRef b, bool enforce_m2) {
  const BlockStore& store = view.store();
  if (store.chain(b) == 0) return diffadjust::check_difficulty_rules(view, b, enforce_m2);
  std::vector<CandidateVote> votes;
  for (BlockRef p : table.votes(b)) {
    if (p >= store.size() || store.kind(p) == BlockKind::Fruit || store.chain(p) != 0) return Verdict::NotProposer;
    votes.push_back({store.covered_interval(p), p});
  }
  return check_votes(view, b, votes, enforce_m2);
}

Verdict validate_voter_block(const ChainView& view, BlockRef b, const VoterPayload& payload, bool enforce_m2) {
  const BlockStore& store = view.store();
  std::vector<CandidateVote> votes;
  for (const auto& v : payload.votes) {
    auto p = store.find(v.proposer_block);
    if (!p) return Verdict::Pending;
    votes.push_back({v.interval, *p});
  }
  return check_votes(view, b, votes, enforce_m2);
}

std::vector<Interval> sanitize_votes(const std::vector<Interval>& votes) {
  std::vector<Interval> out;
  out.reserve(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (i == 0)
      out.push_back(votes[i]);
    else
      out.push_back(Interval{votes[i - 1].hi, votes[i].hi});
  }
  return out;
}

std::vector<std::vector<SanitizedVote>> collect_votes(const ChainView& view, const VoteTable& table) {
  const BlockStore& store = view.store();
  std::vector<std::vector<SanitizedVote>> out(store.chain_count());
  for (ChainId c = 1; c < store.chain_count(); ++c) {
    Rational prev(0);
    for (BlockRef b : view.heaviest_chain(c)) {
      for (BlockRef p : table.votes(b)) {
        Interval iv = store.covered_interval(p);
        if (!out[c].empty() || prev.sign() > 0) iv.lo = prev;
        prev = iv.hi;
        out[c].push_back({std::move(iv), p});
      }
    }
  }
  return out;
}

namespace {

BlockRef plurality(std::vector<std::pair<BlockRef, std::uint32_t>>& counts, const BlockStore& store) {
  BlockRef best = kNoBlock;
  std::uint32_t best_n = 0;
  BlockId best_id;
  for (auto [b, n] : counts) {
    if (n > best_n || (n == best_n && store.id(b) < best_id)) {
      best = b;
      best_n = n;
      best_id = store.id(b);
    }
  }
  return best;
}

void bump(std::vector<std::pair<BlockRef, std::uint32_t>>& counts, BlockRef b) {
  for (auto& [k, n] : counts)
    if (k == b) {
      ++n;
      return;
    }
  counts.emplace_back(b, 1);
}

}  // namespace

std::optional<BlockRef> leader_at(const Rational& d, const std::vector<std::vector<SanitizedVote>>& votes,
                                  const BlockStore& store) {
  std::vector<std::pair<BlockRef, std::uint32_t>> counts;
  for (const auto& chain : votes) {
    auto it = std::lower_bound(chain.begin(), chain.end(), d,
                               [](const SanitizedVote& v, const Rational& x) { return v.interval.hi < x; });
    if (it != chain.end() && it->interval.lo < d) bump(counts, it->proposer);
  }
  if (counts.empty()) return std::nullopt;
  return plurality(counts, store);
}

LeaderAssignment assign_leaders(const ChainView& view, const std::vector<std::vector<SanitizedVote>>& votes) {
  const BlockStore& store = view.store();
  std::vector<Rational> points{Rational(0)};
  for (BlockRef b = 0; b < store.size(); ++b)
    if (store.chain(b) == 0 && store.kind(b) != BlockKind::Fruit && view.contains(b)) points.push_back(store.chain_difficulty(b));
  for (const auto& chain : votes)
    for (const auto& v : chain) {
      points.push_back(v.interval.lo);
      points.push_back(v.interval.hi);
    }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto index_of = [&](const Rational& x) {
    return static_cast<std::size_t>(std::lower_bound(points.begin(), points.end(), x) - points.begin());
  };

  const std::size_t k = points.size() - 1;
  std::vector<std::vector<std::pair<BlockRef, std::uint32_t>>> counts(k);
  for (const auto& chain : votes)
    for (const auto& v : chain)
      for (std::size_t j = index_of(v.interval.lo), end = index_of(v.interval.hi); j < end; ++j) bump(counts[j], v.proposer);

  LeaderAssignment out;
  out.atomic_intervals.reserve(k);
  out.leaders.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    out.atomic_intervals.push_back(Interval{points[j], points[j + 1]});
    BlockRef leader = counts[j].empty() ? kNoBlock : plurality(counts[j], store);
    out.leaders.push_back(leader);
    if (leader != kNoBlock && !out.grades.count(leader)) out.grades.emplace(leader, points[j]);
  }
  return out;
}

std::vector<BlockRef> leader_sequence(const LeaderAssignment& a) {
  std::vector<BlockRef> seq;
  for (std::size_t j = 0; j < a.leaders.size(); ++j) {
    BlockRef l = a.leaders[j];
    if (l == kNoBlock) continue;
    if (a.grades.at(l) == a.atomic_intervals[j].lo) seq.push_back(l);
  }
  return seq;
}

std::vector<BlockRef> leader_sequence(const ChainView& view, const VoteTable& votes) {
  return leader_sequence(assign_leaders(view, collect_votes(view, votes)));
}

std::vector<BlockRef> leader_sequence_below(const LeaderAssignment& a, const Rational& d) {
  std::vector<BlockRef> seq;
  for (BlockRef b : leader_sequence(a))
    if (a.grades.at(b) < d) seq.push_back(b);
  return seq;
}

Rational intervals_vs_levels(const ChainView& view) {
  const BlockStore& store = view.store();
  std::vector<Rational> points;
  std::uint32_t max_height = 0;
  for (BlockRef b = 0; b < store.size(); ++b) {
    if (store.chain(b) != 0 || store.kind(b) == BlockKind::Fruit || !view.contains(b)) continue;
    points.push_back(store.chain_difficulty(b));
    max_height = std::max(max_height, store.height(b));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const auto levels = static_cast<std::int64_t>(max_height) + 1;
  return Rational(static_cast<std::int64_t>(points.size()) - levels, levels);
}

}  // namespace pcdiff::prism
