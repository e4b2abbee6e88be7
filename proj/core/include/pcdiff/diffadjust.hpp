#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcdiff/chain_view.hpp"
#include "pcdiff/epoch.hpp"
#include "pcdiff/params.hpp"
#include "pcdiff/validation.hpp"

namespace pcdiff::diffadjust {

// Target a non-pivot block referencing pivot_ref must carry (M1).
Rational nonpivot_target(const BlockId& pivot_ref, const ChainView& view, const ProtocolParams& params);

// M1 target check for any tree block, plus M2 for non-pivot blocks when enforced.
// Returns Pending when the parent or pivot reference is not in the view.
Verdict check_difficulty_rules(const ChainView& view, BlockRef b, bool enforce_m2);

// Pivot block whose chain difficulty the next block on b's chain must not undercut.
BlockRef monotonicity_floor(const BlockStore& store, BlockRef parent);

struct Condition {
  std::string name;
  bool satisfied = false;
  std::optional<Rational> margin;  // lhs - rhs in the satisfied direction; absent when undefined
  bool binding = true;             // informational conditions do not affect the verdict
};

struct ParamReport {
  std::optional<Rational> ell;
  std::vector<Condition> conditions;
  bool all_satisfied() const;
};

ParamReport validate_params(const ProtocolParams& params);

struct RoundRecord {
  Round round = 0;
  double honest_power = 1;  // n_r / n0
  Rational t_min;
  Rational t_max;
};

double good_round_fraction(const std::vector<RoundRecord>& records, const ProtocolParams& params);

}  // namespace pcdiff::diffadjust
