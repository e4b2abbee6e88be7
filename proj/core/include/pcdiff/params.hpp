#pragma once

#include <cstdint>

#include "pcdiff/rational.hpp"

namespace pcdiff {

struct ProtocolParams {
  std::uint32_t m = 10;      // chain count (meaning depends on the protocol, see chain_count())
  std::uint32_t delta = 1;   // network delay bound, rounds
  std::uint32_t kappa = 256; // hash output bits
  std::uint32_t phi = 2016;  // epoch length in pivot blocks
  Rational tau{4};           // dampening filter
  Rational f{1, 5};          // expected blocks per round per chain at equilibrium
  Rational gamma{11, 10};
  std::uint32_t s = 2016;
  Rational delta_adv{1, 2};  // honest advantage
  Rational epsilon{1, 20};
  Rational lambda{30};
  Rational t0{1};            // initial target
  Rational n0;               // initial query count per round; 0 means f / (p T0)
  Rational p;                // success density per query; 0 means 2^-kappa
  std::uint32_t recency = 0; // fruit recency R in rounds; 0 means 3*ell + 7*delta
  Rational sigma;            // fairness slack; 0 means 4*epsilon
  std::uint64_t r_max = 0;
  // Confirmation window used by the simulator's persistence and fruit rules, rounds.
  std::uint32_t ell = 50;
  // Mantissa bits kept when a retarget produces a new difficulty. 0 keeps it exact.
  std::uint32_t target_precision_bits = 32;
  Rational fruit_ratio{1};   // fruit target = fruit_ratio * block target

  Rational p_value() const { return p.is_zero() ? Rational::pow2(-static_cast<int>(kappa)) : p; }
  Rational n0_value() const { return n0.is_zero() ? f / (p_value() * t0) : n0; }
  std::uint32_t recency_value() const { return recency ? recency : 3 * ell + 7 * delta; }
  Rational sigma_value() const { return sigma.is_zero() ? Rational(4) * epsilon : sigma; }
  std::uint32_t r_wait() const { return 2 * ell + 5 * delta; }

  friend bool operator==(const ProtocolParams&, const ProtocolParams&) = default;
};

}  // namespace pcdiff
