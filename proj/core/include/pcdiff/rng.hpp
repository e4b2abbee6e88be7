#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace pcdiff::sim {

// Counter-based stream: every (seed, round, chain, class) key owns an independent
// splitmix64 sequence, so the draws of one key never depend on other draws.
class KeyedRng {
 public:
  using result_type = std::uint64_t;

  KeyedRng(std::uint64_t seed, std::uint64_t round, std::uint64_t chain, std::uint64_t cls) {
    state_ = mix(mix(mix(mix(seed) ^ round) ^ (chain << 20)) ^ (cls * 0x9e3779b97f4a7c15ULL));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline std::uint32_t poisson_draw(KeyedRng& rng, double mean) {
  if (!(mean > 0)) return 0;
  std::poisson_distribution<std::uint32_t> d(mean);
  return d(rng);
}

}  // namespace pcdiff::sim
