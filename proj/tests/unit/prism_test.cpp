#include <gtest/gtest.h>

#include <map>

#include "generators.hpp"
#include "pcdiff/prism.hpp"
#include "world.hpp"

namespace pcdiff {
namespace {

using prism::VoteTable;
using testing::Gen;
using testing::unit_params;
using testing::World;

Interval iv(Rational lo, Rational hi) { return Interval{std::move(lo), std::move(hi)}; }

TEST(SanitizeVotes, OverlapsBecomeContiguous) {
  const std::vector<Interval> in{iv(0, 1), iv(Rational(1, 2), 2), iv(2, 3), iv(Rational(5, 2), 4)};
  const std::vector<Interval> want{iv(0, 1), iv(1, 2), iv(2, 3), iv(3, 4)};
  EXPECT_EQ(prism::sanitize_votes(in), want);
  EXPECT_TRUE(prism::sanitize_votes({}).empty());
}

TEST(SanitizeVotes, NestedExampleAndSingleVote) {
  EXPECT_EQ(prism::sanitize_votes({iv(0, 2), iv(1, 3), iv(2, 5)}), (std::vector<Interval>{iv(0, 2), iv(2, 3), iv(3, 5)}));
  EXPECT_EQ(prism::sanitize_votes({iv(0, 1)}), (std::vector<Interval>{iv(0, 1)}));
}

TEST(LeaderAt, PluralityAndSmallestIdOnTies) {
  World w(1, unit_params());
  BlockRef a = w.pivot(0, 1), b = w.pivot(0, 1);
  auto votes_for = [&](std::vector<BlockRef> who) {
    std::vector<std::vector<prism::SanitizedVote>> v(1);
    for (BlockRef x : who) v.push_back({{w.store->covered_interval(x), x}});
    return v;
  };
  const Rational d(3, 2);
  EXPECT_EQ(*prism::leader_at(d, votes_for({a, a, a, b, b}), *w.store), a);
  EXPECT_EQ(*prism::leader_at(d, votes_for({a, b, b, b, a}), *w.store), b);
  const BlockRef smaller = w.store->id(a) < w.store->id(b) ? a : b;
  EXPECT_EQ(*prism::leader_at(d, votes_for({a, b}), *w.store), smaller);
  EXPECT_FALSE(prism::leader_at(Rational(5), votes_for({a, b}), *w.store).has_value());
  EXPECT_EQ(*prism::leader_at(d, votes_for({b}), *w.store), b);
}

TEST(LeaderSequence, HeavyBranchOutvotesLongEasyBranch) {
  World w(2, unit_params());
  BlockRef heavy1 = w.add(0, 0, Rational(1, 4), 1), heavy2 = w.add(0, heavy1, Rational(1, 4), 2);  // difficulties 5, 9
  std::vector<BlockRef> easy;
  BlockRef e = 0;
  for (int i = 0; i < 8; ++i) easy.push_back(e = w.add(0, e, Rational(1), 3));  // difficulties 2..9 one at a time
  VoteTable votes;
  for (BlockRef b = 0; b < w.store->size(); ++b) votes.set(b, {});
  BlockRef v = w.follower(1, 1, heavy2, 4);
  votes.set(v, prism::honest_votes(*w.store, 1, heavy2));
  const auto seq = prism::leader_sequence(*w.view, votes);
  EXPECT_EQ(seq, (std::vector<BlockRef>{0, heavy1, heavy2}));
  for (BlockRef x : easy) EXPECT_EQ(std::count(seq.begin(), seq.end(), x), 0);
}

// Proposer chain g - p1 - p2 - p3 at unit difficulty; genesis difficulty is 1.
struct Linear {
  World w{2, unit_params()};
  VoteTable votes;
  BlockRef p1 = w.pivot(0, 1), p2 = w.pivot(p1, 2), p3 = w.pivot(p2, 3);

  BlockRef voter(BlockRef parent, BlockRef ref, std::vector<BlockRef> v, bool insert = true) {
    BlockRef b = w.follower(1, parent, ref, 4, insert);
    votes.set(b, v);
    return b;
  }
};

TEST(HonestVotes, CoverEverythingAboveLastVoted) {
  Linear l;
  EXPECT_EQ(prism::last_voted(*l.w.store, 1), Rational(0));
  EXPECT_EQ(prism::honest_votes(*l.w.store, 1, l.p3), (std::vector<BlockRef>{0, l.p1, l.p2, l.p3}));
  BlockRef v1 = l.voter(1, l.p1, {0, l.p1});
  EXPECT_EQ(prism::last_voted(*l.w.store, v1), Rational(2));
  EXPECT_EQ(prism::honest_votes(*l.w.store, v1, l.p3), (std::vector<BlockRef>{l.p2, l.p3}));
  EXPECT_TRUE(prism::honest_votes(*l.w.store, v1, l.p1).empty());
}

TEST(ValidateVoterBlock, AcceptsContiguousVotesEndingAtReference) {
  Linear l;
  BlockRef v1 = l.voter(1, l.p2, {0, l.p1, l.p2});
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, v1, true), Verdict::Valid);
  BlockRef v2 = l.voter(v1, l.p3, {l.p3});
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, v2, true), Verdict::Valid);
}

TEST(ValidateVoterBlock, RejectsGapTerminusAndNonProposer) {
  Linear l;
  BlockRef gap = l.voter(1, l.p3, {0, l.p2, l.p3}, false);
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, gap, true), Verdict::VoteGap);
  BlockRef short_votes = l.voter(1, l.p3, {0, l.p1, l.p2}, false);
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, short_votes, true), Verdict::VoteTerminus);
  BlockRef start_late = l.voter(1, l.p3, {l.p1, l.p2, l.p3}, false);
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, start_late, true), Verdict::VoteGap);
  BlockRef own = l.voter(1, l.p1, {1}, false);
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, own, true), Verdict::NotProposer);
  BlockRef none = l.voter(1, l.p1, {}, false);
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, none, true), Verdict::VoteTerminus);
}

TEST(ValidateVoterBlock, PayloadIntervalsMustMatchCoveredIntervals) {
  Linear l;
  BlockRef b = l.w.follower(1, 1, l.p2, 4, false);
  const BlockStore& s = *l.w.store;
  prism::VoterPayload good{{{1, s.id(0), iv(0, 1)}, {1, s.id(l.p1), iv(1, 2)}, {1, s.id(l.p2), iv(2, 3)}}};
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, b, good, true), Verdict::Valid);
  prism::VoterPayload bad = good;
  bad.votes[1].interval = iv(Rational(3, 2), 2);
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, b, bad, true), Verdict::VoteMismatch);
  prism::VoterPayload unknown = good;
  unknown.votes[0].proposer_block = BlockId::derive(999, 3);
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, b, unknown, true), Verdict::Pending);
}

TEST(ValidateVoterBlock, VoteOnOtherBranchMayStartAtLastVoted) {
  Linear l;
  BlockRef q2 = l.w.pivot(l.p1, 2), q3 = l.w.pivot(q2, 3);
  BlockRef v1 = l.voter(1, l.p2, {0, l.p1, l.p2});
  // last voted difficulty 3 is the open end of q3's interval (3, 4]
  BlockRef v2 = l.voter(v1, q3, {q3});
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, v2, true), Verdict::Valid);
  EXPECT_EQ(prism::honest_votes(*l.w.store, v1, q3), (std::vector<BlockRef>{q3}));
}

TEST(ValidateVoterBlock, StaleReferenceBreaksMonotonicityOnlyWithM2) {
  Linear l;
  BlockRef v1 = l.voter(1, l.p3, {0, l.p1, l.p2, l.p3});
  BlockRef v2 = l.voter(v1, l.p1, {}, false);
  EXPECT_EQ(prism::validate_voter_block(*l.w.view, l.votes, v2, true), Verdict::Monotonicity);
  EXPECT_NE(prism::validate_voter_block(*l.w.view, l.votes, v2, false), Verdict::Monotonicity);
}

TEST(IntervalsVsLevels, LinearChainHasNoOverheadAndForksAddPoints) {
  World w(2, unit_params());
  BlockRef p1 = w.pivot(0, 1);
  w.pivot(p1, 2);
  EXPECT_EQ(prism::intervals_vs_levels(*w.view), Rational(0));
  w.add(0, 0, Rational(1, 3), 1);  // chain difficulty 4
  EXPECT_EQ(prism::intervals_vs_levels(*w.view), Rational(1, 3));
  w.add(0, 0, Rational(1, 2), 1);  // chain difficulty 3 already a point
  EXPECT_EQ(prism::intervals_vs_levels(*w.view), Rational(1, 3));
}

// Random proposer trees with mixed difficulties and honest voters on every chain.
struct RandomPrism {
  World w;
  VoteTable votes;
  std::vector<BlockRef> proposers{0};

  RandomPrism(Gen& g, std::uint32_t voters) : w(voters + 1, unit_params()) {
    std::vector<std::vector<BlockRef>> voter_blocks(voters + 1);
    for (ChainId c = 1; c <= voters; ++c) {
      voter_blocks[c].push_back(c);
      votes.set(c, {});
    }
    for (int i = 0; i < 60; ++i) {
      if (g.coin(0.4)) {
        BlockRef parent = g.pick(proposers);
        proposers.push_back(w.add(0, parent, Rational(1, g.integer(1, 3)), 1));
        votes.set(proposers.back(), {});
      } else {
        ChainId c = static_cast<ChainId>(g.integer(1, voters));
        BlockRef parent = g.coin(0.8) ? w.view->tip(c) : g.pick(voter_blocks[c]);
        BlockRef target = g.pick(proposers);
        auto v = prism::honest_votes(*w.store, parent, target);
        BlockRef ref = v.empty() ? w.store->pivot_ref(parent) : target;
        if (ref == kNoBlock) ref = 0;
        BlockRef b = w.follower(c, parent, ref, 1);
        votes.set(b, v);
        voter_blocks[c].push_back(b);
      }
    }
  }
};

struct OracleLeaders {
  std::vector<Interval> atomic;
  std::vector<BlockRef> leaders;
};

OracleLeaders brute_leaders(const World& w, const std::vector<std::vector<prism::SanitizedVote>>& votes) {
  const BlockStore& s = *w.store;
  std::vector<Rational> pts{Rational(0)};
  for (BlockRef b = 0; b < s.size(); ++b)
    if (s.chain(b) == 0 && w.view->contains(b)) pts.push_back(s.chain_difficulty(b));
  for (const auto& chain : votes)
    for (const auto& v : chain) {
      pts.push_back(v.interval.lo);
      pts.push_back(v.interval.hi);
    }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  OracleLeaders out;
  for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
    const Rational mid = (pts[j] + pts[j + 1]) / Rational(2);
    std::map<BlockRef, int> count;
    for (const auto& chain : votes)
      for (const auto& v : chain)
        if (v.interval.lo < mid && mid <= v.interval.hi) ++count[v.proposer];
    BlockRef best = kNoBlock;
    int best_n = 0;
    for (auto [b, n] : count)
      if (n > best_n || (n == best_n && s.id(b) < s.id(best))) {
        best = b;
        best_n = n;
      }
    out.atomic.push_back(iv(pts[j], pts[j + 1]));
    out.leaders.push_back(best);
  }
  return out;
}

TEST(LeaderProperty, AssignmentMatchesBruteForce) {
  Gen g(41);
  for (int trial = 0; trial < 150; ++trial) {
    RandomPrism p(g, static_cast<std::uint32_t>(g.integer(1, 5)));
    const auto collected = prism::collect_votes(*p.w.view, p.votes);
    // each voter chain's sanitized votes tile a prefix of the difficulty axis
    for (const auto& chain : collected)
      for (std::size_t i = 1; i < chain.size(); ++i) EXPECT_EQ(chain[i].interval.lo, chain[i - 1].interval.hi);
    const auto got = prism::assign_leaders(*p.w.view, collected);
    const auto want = brute_leaders(p.w, collected);
    ASSERT_EQ(got.atomic_intervals, want.atomic);
    ASSERT_EQ(got.leaders, want.leaders);
    std::vector<BlockRef> seq;
    for (BlockRef l : want.leaders)
      if (l != kNoBlock && std::find(seq.begin(), seq.end(), l) == seq.end()) seq.push_back(l);
    EXPECT_EQ(prism::leader_sequence(got), seq);
    EXPECT_EQ(prism::leader_sequence(*p.w.view, p.votes), seq);
    for (std::size_t j = 0; j < want.atomic.size(); ++j) {
      auto at = prism::leader_at(want.atomic[j].hi, collected, *p.w.store);
      EXPECT_EQ(at.value_or(kNoBlock), want.leaders[j]);
    }
    if (!seq.empty()) {
      const Rational cut = got.grades.at(seq.back());
      auto below = prism::leader_sequence_below(got, cut);
      EXPECT_EQ(below, std::vector<BlockRef>(seq.begin(), seq.end() - 1));
    }
  }
}

TEST(LeaderProperty, HonestVotesValidate) {
  Gen g(42);
  for (int trial = 0; trial < 50; ++trial) {
    RandomPrism p(g, 3);
    for (BlockRef b = 0; b < p.w.store->size(); ++b)
      if (p.w.store->chain(b) != 0 && !p.w.store->is_genesis(b)) {
        Verdict v = prism::validate_voter_block(*p.w.view, p.votes, b, false);
        EXPECT_EQ(v, Verdict::Valid) << to_string(v);
      }
  }
}

}  // namespace
}  // namespace pcdiff
