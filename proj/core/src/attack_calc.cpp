#include "pcdiff/attack_calc.hpp"

#include <cmath>
#include <string>

#include "pcdiff/errors.hpp"

namespace pcdiff::analysis {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// 1 - (1 - q)^e, accurate for small q.
double one_minus_pow(double q, double e) {
  if (e <= 0) return 0;
  if (q >= 1) return 1;
  return -std::expm1(e * std::log1p(-q));
}

}  // namespace

double simple_attack_prob(double n, double t, double k) {
  require(n > 0, "n must be positive");
  require(k > 0, "k must be positive");
  require(t >= 0, "t must be non-negative");
  require(n * k >= 1, "nk must be at least 1");
  return one_minus_pow(1.0 / (n * k), t * k);
}

double simple_attack_limit(double n, double t) {
  require(n > 0, "n must be positive");
  require(t >= 0, "t must be non-negative");
  return -std::expm1(-t / n);
}

double raising_attack_prob(double n, double t, double phi, double x) {
  require(n > 0, "n must be positive");
  require(t >= 0 && t <= n, "t must lie in [0, n]");
  require(phi >= 0, "phi must be non-negative");
  require(x > 0, "X must be positive");
  const double exponent = x * t - (n - t) * phi;
  if (exponent <= 0) return 0;
  require(n * x >= 1, "nX must be at least 1");
  return one_minus_pow(1.0 / (n * x), exponent);
}

double dampened_catchup_deficit(double n, double t, double tau, double phi) {
  require(t > 0, "t must be positive");
  require(tau > 1, "tau must exceed 1");
  require(n >= t, "n must be at least t");
  return (n - t) * phi / (t * (tau - 1));
}

}  // namespace pcdiff::analysis
