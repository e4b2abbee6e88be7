#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pcdiff/params.hpp"
#include "pcdiff/rational.hpp"

// Reference computations written straight from the definitions, on GMP rationals,
// sharing no code with the library under test.
namespace pcdiff::testing::oracle {

inline mpq_class q(const Rational& r) {
  mpq_class x(r.numerator_str() + "/" + r.denominator_str());
  x.canonicalize();
  return x;
}

inline mpq_class pow2(unsigned e) {
  mpz_class z = 1;
  z <<= e;
  return mpq_class(z);
}

inline mpq_class clamp(const mpq_class& raw, const mpq_class& t, const mpq_class& tau) {
  if (raw < t / tau) return t / tau;
  if (raw > t * tau) return t * tau;
  return raw;
}

// Target the next pivot block carries after a chain with timestamps r_0 (genesis) .. r_v.
inline mpq_class next_target(const std::vector<std::uint32_t>& r, const ProtocolParams& p) {
  const mpq_class t0 = q(p.t0), tau = q(p.tau), f = q(p.f);
  const mpq_class two_kappa = pow2(p.kappa);
  const mpq_class prob = p.p.is_zero() ? mpq_class(1) / two_kappa : q(p.p);
  const mpq_class n0 = p.n0.is_zero() ? f / (prob * t0) : q(p.n0);
  mpq_class t = t0;
  if (r.empty()) return t;
  const std::size_t v = r.size() - 1;
  for (std::size_t b = p.phi; b <= v; b += p.phi) {
    long lambda = static_cast<long>(r[b]) - static_cast<long>(r[b - p.phi]);
    if (lambda <= 0) lambda = 1;
    const mpq_class n = two_kappa * p.phi / (t * lambda);
    const mpq_class raw = n0 / n * t0;
    t = clamp(raw, t, tau);
  }
  return t;
}

// ell = 4(1+3e)/(e^2 f [1-(1+d)g^2 f]^(D+1)) * max(D, tau) * g^3 * lambda
inline double ell(double eps, double delta, double gamma, double f, int Delta, double tau, double lambda) {
  const double base = 1 - (1 + delta) * gamma * gamma * f;
  return 4 * (1 + 3 * eps) / (eps * eps * f * std::pow(base, Delta + 1)) * std::max<double>(Delta, tau) *
         gamma * gamma * gamma * lambda;
}

struct Estimate {
  double p = 0;
  double sigma = 0;
};

// Each trial makes `queries` hash attempts that each succeed with probability 1/inv;
// the attack succeeds when any attempt does.
inline Estimate lottery(std::uint64_t queries, std::uint64_t inv, std::uint64_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> hash(0, inv - 1);
  std::uint64_t wins = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    for (std::uint64_t j = 0; j < queries; ++j)
      if (hash(rng) == 0) {
        ++wins;
        break;
      }
  }
  Estimate e;
  e.p = static_cast<double>(wins) / static_cast<double>(trials);
  e.sigma = std::sqrt(e.p * (1 - e.p) / static_cast<double>(trials));
  return e;
}

}  // namespace pcdiff::testing::oracle
