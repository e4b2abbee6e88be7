#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcdiff/block.hpp"
#include "pcdiff/params.hpp"
#include "pcdiff/rational.hpp"

namespace pcdiff::diffadjust {

// Difficulty schedule seen by the children of one pivot block.
struct EpochState {
  std::uint64_t epoch_index = 0;
  Round epoch_start_timestamp = 0;
  Rational current_target;
  std::uint32_t blocks_in_epoch = 0;
};

// Unclamped recalculated target for an epoch of duration lambda rounds at target t.
Rational raw_target(const Rational& t, std::int64_t lambda, const ProtocolParams& params);

// One recalculation step: raw target clamped to [t/tau, tau*t], then quantized.
Rational retarget(const Rational& t, std::int64_t lambda, const ProtocolParams& params);

// Rounds a difficulty to `bits` mantissa bits, toward `previous` so clamps still hold.
Rational quantize_difficulty(const Rational& difficulty, const Rational& previous, std::uint32_t bits);

// Target for the next pivot block given r_0 (genesis) .. r_v. Empty input means genesis only.
Rational next_target(std::span<const Round> timestamps, const ProtocolParams& params);

// Incremental epoch states for every block of the pivot tree, indexed by position on chain 0.
class EpochTracker {
 public:
  explicit EpochTracker(const ProtocolParams& params);

  void add_genesis(Round timestamp);
  // Appends the state for a pivot block at `height` whose parent has local index parent_local.
  void add(std::uint32_t parent_local, std::uint32_t height, Round timestamp);

  EpochState state(std::uint32_t local) const;
  const Rational& child_target(std::uint32_t local) const { return targets_[states_[local].target_id]; }
  std::size_t size() const { return states_.size(); }

 private:
  struct Entry {
    std::uint64_t epoch_index = 0;
    Round epoch_start_timestamp = 0;
    std::uint32_t blocks_in_epoch = 0;
    std::uint32_t target_id = 0;
  };

  ProtocolParams params_;
  std::vector<Entry> states_;
  std::vector<Rational> targets_;
};

}  // namespace pcdiff::diffadjust
