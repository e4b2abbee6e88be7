#include "pcdiff/diffadjust.hpp"

#include <algorithm>

#include "pcdiff/errors.hpp"

namespace pcdiff {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Pending: return "pending";
    case Verdict::TargetMismatch: return "target-mismatch";
    case Verdict::Monotonicity: return "monotonicity";
    case Verdict::VoteGap: return "vote-gap";
    case Verdict::VoteTerminus: return "vote-terminus";
    case Verdict::VoteMismatch: return "vote-mismatch";
    case Verdict::NotProposer: return "not-proposer";
    case Verdict::RankMismatch: return "rank-mismatch";
    case Verdict::TrailingInvalid: return "trailing-invalid";
    case Verdict::FruitStale: return "fruit-stale";
    case Verdict::FruitDuplicate: return "fruit-duplicate";
    case Verdict::FruitTarget: return "fruit-target";
    case Verdict::FruitParent: return "fruit-parent";
    case Verdict::InvalidReference: return "invalid-reference";
  }
  return "unknown";
}

namespace diffadjust {

Rational nonpivot_target(const BlockId& pivot_ref, const ChainView& view, const ProtocolParams& params) {
  const BlockStore& store = view.store();
  BlockRef b = store.lookup(pivot_ref);
  if (!view.contains(b) || store.chain(b) != 0 || store.kind(b) == BlockKind::Fruit)
    throw LookupError("pivot reference " + pivot_ref.short_hex() + " is not a known pivot block");
  if (store.params().phi != params.phi || store.params().tau != params.tau || store.params().t0 != params.t0)
    throw DomainError("params differ from the ones the store was built with");
  return store.child_target(b);
}

BlockRef monotonicity_floor(const BlockStore& store, BlockRef parent) {
  return store.is_genesis(parent) ? store.genesis(0) : store.pivot_ref(parent);
}

Verdict check_difficulty_rules(const ChainView& view, BlockRef b, bool enforce_m2) {
  const BlockStore& store = view.store();
  BlockRef parent = store.parent(b);
  if (!view.contains(parent)) return Verdict::Pending;
  if (store.chain(b) == 0) return store.target(b) == store.child_target(parent) ? Verdict::Valid : Verdict::TargetMismatch;
  BlockRef ref = store.pivot_ref(b);
  if (!view.contains(ref)) return Verdict::Pending;
  if (store.target(b) != store.child_target(ref)) return Verdict::TargetMismatch;
  if (enforce_m2 && store.chain_difficulty(ref) < store.chain_difficulty(monotonicity_floor(store, parent)))
    return Verdict::Monotonicity;
  return Verdict::Valid;
}

bool ParamReport::all_satisfied() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return !c.binding || c.satisfied; });
}

ParamReport validate_params(const ProtocolParams& p) {
  const Rational one(1);
  if (p.f.sign() <= 0 || p.gamma.sign() <= 0 || p.delta_adv.sign() <= 0 || p.epsilon.sign() <= 0 ||
      p.lambda.sign() <= 0 || p.tau < one || p.phi == 0)
    throw DomainError("parameters must be positive with tau >= 1 and phi >= 1");

  ParamReport report;
  const Rational load = (one + p.delta_adv) * p.gamma * p.gamma * p.f;  // (1+δ)γ²f
  const Rational base = one - load;
  const Rational delta_rounds(p.delta);

  if (load >= one) {
    report.conditions.push_back({"ell-defined: (1+delta)*gamma^2*f < 1", false, std::nullopt, true});
  } else {
    report.conditions.push_back({"ell-defined: (1+delta)*gamma^2*f < 1", true, base, true});
    Rational mx = delta_rounds > p.tau ? delta_rounds : p.tau;
    Rational ell = Rational(4) * (one + Rational(3) * p.epsilon) /
                   (p.epsilon * p.epsilon * p.f * base.pow(p.delta + 1)) * mx * p.gamma.pow(3) * p.lambda;
    report.ell = ell;
  }

  if (report.ell) {
    Rational scale = Rational(4) * load * (*report.ell + Rational(3) * delta_rounds);
    Rational need = scale / p.epsilon;
    Rational margin = Rational(p.phi) - need;
    report.conditions.push_back({"epoch-length: phi >= 4(1+delta)gamma^2 f (ell+3Delta) / eps", margin.sign() >= 0, margin, true});
    Rational need_alt = scale * p.epsilon;
    Rational margin_alt = Rational(p.phi) - need_alt;
    report.conditions.push_back({"epoch-length-alt: phi >= 4(1+delta)gamma^2 f (ell+3Delta) * eps", margin_alt.sign() >= 0, margin_alt, false});
  } else {
    report.conditions.push_back({"epoch-length: phi >= 4(1+delta)gamma^2 f (ell+3Delta) / eps", false, std::nullopt, true});
    report.conditions.push_back({"epoch-length-alt: phi >= 4(1+delta)gamma^2 f (ell+3Delta) * eps", false, std::nullopt, false});
  }

  if (load >= one) {
    report.conditions.push_back({"growth: [1-(1+delta)gamma^2 f]^Delta >= 1-eps", false, std::nullopt, true});
  } else {
    Rational margin = base.pow(p.delta) - (one - p.epsilon);
    report.conditions.push_back({"growth: [1-(1+delta)gamma^2 f]^Delta >= 1-eps", margin.sign() >= 0, margin, true});
  }
  Rational lower = p.delta_adv - Rational(8) * p.epsilon;
  report.conditions.push_back({"advantage-lower: 8 eps <= delta", lower.sign() >= 0, lower, true});
  Rational upper = one - p.delta_adv;
  report.conditions.push_back({"advantage-upper: delta <= 1", upper.sign() >= 0, upper, true});
  return report;
}

double good_round_fraction(const std::vector<RoundRecord>& records, const ProtocolParams& params) {
  if (records.empty()) return 1.0;
  const double pn0 = (params.p_value() * params.n0_value()).to_double();
  const double f = params.f.to_double();
  const double g2 = params.gamma.to_double() * params.gamma.to_double();
  const double hi = (1.0 + params.delta_adv.to_double()) * g2 * f;
  const double lo = f / (2.0 * g2);
  std::size_t good = 0;
  for (const auto& r : records) {
    double rate = pn0 * r.honest_power;
    if (lo <= rate * r.t_min.to_double() && rate * r.t_max.to_double() <= hi) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(records.size());
}

}  // namespace diffadjust
}  // namespace pcdiff
