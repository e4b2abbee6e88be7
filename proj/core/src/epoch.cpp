#include "pcdiff/epoch.hpp"

#include <algorithm>

#include "pcdiff/errors.hpp"

namespace pcdiff::diffadjust {

Rational raw_target(const Rational& t, std::int64_t lambda, const ProtocolParams& params) {
  if (lambda <= 0) lambda = 1;
  // n(T, L) = 2^kappa * phi / (T * L); raw = n0 / n(T, L) * T0
  Rational n = Rational::pow2(static_cast<int>(params.kappa)) * Rational(params.phi) / (t * Rational(lambda));
  return params.n0_value() / n * params.t0;
}

Rational quantize_difficulty(const Rational& difficulty, const Rational& previous, std::uint32_t bits) {
  if (bits == 0 || difficulty == previous) return difficulty;
  int e = difficulty.floor_log2();
  Rational granule = Rational::pow2(e - static_cast<int>(bits) + 1);
  if (difficulty > previous) {
    Rational q = (difficulty / granule).floor() * granule;
    return q < previous ? previous : q;
  }
  Rational q = (difficulty / granule).ceil() * granule;
  return q > previous ? previous : q;
}

Rational retarget(const Rational& t, std::int64_t lambda, const ProtocolParams& params) {
  Rational raw = raw_target(t, lambda, params);
  Rational lo = t / params.tau;
  Rational hi = t * params.tau;
  Rational clamped = raw < lo ? lo : (raw > hi ? hi : raw);
  if (params.target_precision_bits == 0) return clamped;
  return quantize_difficulty(clamped.reciprocal(), t.reciprocal(), params.target_precision_bits).reciprocal();
}

Rational next_target(std::span<const Round> timestamps, const ProtocolParams& params) {
  if (params.phi == 0) throw DomainError("epoch length must be positive");
  Rational t = params.t0;
  if (timestamps.empty()) return t;
  std::size_t v = timestamps.size() - 1;
  for (std::size_t k = params.phi; k <= v; k += params.phi) {
    std::int64_t lambda = static_cast<std::int64_t>(timestamps[k]) - static_cast<std::int64_t>(timestamps[k - params.phi]);
    t = retarget(t, lambda, params);
  }
  return t;
}

EpochTracker::EpochTracker(const ProtocolParams& params) : params_(params) {
  if (params_.phi == 0) throw DomainError("epoch length must be positive");
}

void EpochTracker::add_genesis(Round timestamp) {
  targets_.push_back(params_.t0);
  states_.push_back(Entry{0, timestamp, 0, static_cast<std::uint32_t>(targets_.size() - 1)});
}

void EpochTracker::add(std::uint32_t parent_local, std::uint32_t height, Round timestamp) {
  const Entry parent = states_.at(parent_local);
  if (height % params_.phi != 0) {
    states_.push_back(Entry{parent.epoch_index, parent.epoch_start_timestamp, parent.blocks_in_epoch + 1, parent.target_id});
    return;
  }
  std::int64_t lambda = static_cast<std::int64_t>(timestamp) - static_cast<std::int64_t>(parent.epoch_start_timestamp);
  Rational t = retarget(targets_[parent.target_id], lambda, params_);
  std::uint32_t id = parent.target_id;
  if (t != targets_[id]) {
    targets_.push_back(std::move(t));
    id = static_cast<std::uint32_t>(targets_.size() - 1);
  }
  states_.push_back(Entry{height / params_.phi, timestamp, 0, id});
}

EpochState EpochTracker::state(std::uint32_t local) const {
  const Entry& e = states_.at(local);
  return EpochState{e.epoch_index, e.epoch_start_timestamp, targets_[e.target_id], e.blocks_in_epoch};
}

}  // namespace pcdiff::diffadjust
