#pragma once

#include <cstdint>
#include <string_view>

namespace pcdiff {

enum class Verdict : std::uint8_t {
  Valid,
  Pending,          // a referenced block is not yet known to the view
  TargetMismatch,   // M1
  Monotonicity,     // M2
  VoteGap,
  VoteTerminus,
  VoteMismatch,     // a vote's interval differs from the voted block's covered interval
  NotProposer,      // a vote points at a block off the proposer tree
  RankMismatch,
  TrailingInvalid,
  FruitStale,
  FruitDuplicate,
  FruitTarget,
  FruitParent,
  InvalidReference, // depends on a block this view rejected
};

std::string_view to_string(Verdict v);

}  // namespace pcdiff
