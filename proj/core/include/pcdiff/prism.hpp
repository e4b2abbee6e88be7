#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pcdiff/chain_view.hpp"
#include "pcdiff/validation.hpp"

namespace pcdiff::prism {

// Chain 0 is the proposer tree; chains 1..m are voter trees.

struct Vote {
  ChainId voter_chain = 0;
  BlockId proposer_block;
  Interval interval;
};

struct VoterPayload {
  std::vector<Vote> votes;
};

// Votes of every voter block, stored as proposer block refs in one flat array.
class VoteTable {
 public:
  void set(BlockRef voter_block, std::span<const BlockRef> proposers);
  std::span<const BlockRef> votes(BlockRef voter_block) const;
  std::size_t total_votes() const { return flat_.size(); }

 private:
  std::vector<std::uint64_t> begin_{0};  // begin_[b]..begin_[b+1]
  std::vector<BlockRef> flat_;
};

// Last difficulty voted by the chain ending at voter block b; 0 at genesis.
Rational last_voted(const BlockStore& store, BlockRef voter_block);

// Votes an honest miner puts in a block extending `parent` with proposer parent `proposer`.
std::vector<BlockRef> honest_votes(const BlockStore& store, BlockRef parent, BlockRef proposer);

Verdict validate_voter_block(const ChainView& view, const VoteTable& votes, BlockRef b, bool enforce_m2);
// Same rules for a block whose payload is given explicitly (intervals included).
Verdict validate_voter_block(const ChainView& view, BlockRef b, const VoterPayload& payload, bool enforce_m2);

// (a1,b1],(a2,b2],... -> (a1,b1],(b1,b2],...
std::vector<Interval> sanitize_votes(const std::vector<Interval>& votes);

struct SanitizedVote {
  Interval interval;
  BlockRef proposer = kNoBlock;
};

// Sanitized votes along the heaviest chain of every voter tree; index 0 is unused.
std::vector<std::vector<SanitizedVote>> collect_votes(const ChainView& view, const VoteTable& votes);

std::optional<BlockRef> leader_at(const Rational& d, const std::vector<std::vector<SanitizedVote>>& votes,
                                  const BlockStore& store);

struct LeaderAssignment {
  std::vector<Interval> atomic_intervals;
  std::vector<BlockRef> leaders;  // kNoBlock where no chain votes
  std::map<BlockRef, Rational> grades;
};

LeaderAssignment assign_leaders(const ChainView& view, const std::vector<std::vector<SanitizedVote>>& votes);
std::vector<BlockRef> leader_sequence(const LeaderAssignment& assignment);
std::vector<BlockRef> leader_sequence(const ChainView& view, const VoteTable& votes);

// Leader sequence restricted to grades strictly below d.
std::vector<BlockRef> leader_sequence_below(const LeaderAssignment& assignment, const Rational& d);

// (#atomic intervals - #levels) / #levels over the proposer tree of the view.
Rational intervals_vs_levels(const ChainView& view);

}  // namespace pcdiff::prism
