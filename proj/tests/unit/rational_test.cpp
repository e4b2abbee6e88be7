#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "pcdiff/errors.hpp"
#include "pcdiff/rational.hpp"

namespace pcdiff {
namespace {

using testing::Gen;
using testing::oracle::q;

TEST(Rational, ReducesAndKeepsDenominatorPositive) {
  Rational r(6, -4);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rational(0, 5).str(), "0");
  EXPECT_THROW(Rational(1, 0), DomainError);
}

TEST(Rational, ParsesDecimalAndFractionForms) {
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_EQ(Rational::parse("-3/4"), Rational(-3, 4));
  EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
  EXPECT_EQ(Rational::parse("1e-3"), Rational(1, 1000));
  EXPECT_EQ(Rational::parse("2.5e2"), Rational(250));
  EXPECT_THROW(Rational::parse("abc"), Error);
  EXPECT_THROW(Rational::parse("1/0"), Error);
}

TEST(Rational, Pow2AndFloorLog2) {
  EXPECT_EQ(Rational::pow2(-3), Rational(1, 8));
  EXPECT_EQ(Rational::pow2(256).floor_log2(), 256);
  EXPECT_FALSE(Rational::pow2(256).is_small());
  EXPECT_EQ(Rational(5, 8).floor_log2(), -1);
  EXPECT_EQ(Rational(1, 8).floor_log2(), -3);
  EXPECT_EQ(Rational(-9).floor_log2(), 3);
}

TEST(Rational, FloorAndCeil) {
  EXPECT_EQ(Rational(7, 2).floor(), Rational(3));
  EXPECT_EQ(Rational(7, 2).ceil(), Rational(4));
  EXPECT_EQ(Rational(-7, 2).floor(), Rational(-4));
  EXPECT_EQ(Rational(-7, 2).ceil(), Rational(-3));
  EXPECT_EQ(Rational(4).floor(), Rational(4));
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(Rational::from_double(0.375), Rational(3, 8));
  EXPECT_EQ(Rational::from_double(0.1).to_double(), 0.1);
}

TEST(Rational, CanonicalFormDropsBackToSmall) {
  Rational big = Rational::pow2(100);
  EXPECT_FALSE(big.is_small());
  Rational back = big / Rational::pow2(99);
  EXPECT_TRUE(back.is_small());
  EXPECT_EQ(back, Rational(2));
}

// Field operations agree with GMP on random small and huge operands.
TEST(RationalProperty, ArithmeticMatchesGmp) {
  Gen g(11);
  for (int i = 0; i < 4000; ++i) {
    Rational a = g.coin(0.2) ? g.huge() : g.any();
    Rational b = g.coin(0.2) ? g.huge() : g.any();
    const mpq_class qa = q(a), qb = q(b);
    EXPECT_EQ(q(a + b), qa + qb);
    EXPECT_EQ(q(a - b), qa - qb);
    EXPECT_EQ(q(a * b), qa * qb);
    if (!b.is_zero()) {
      EXPECT_EQ(q(a / b), qa / qb);
    }
    EXPECT_EQ(a < b, qa < qb);
    EXPECT_EQ(a == b, qa == qb);
    // canonical: small whenever both parts fit in int64
    const mpq_class s = qa * qb;
    const bool fits = s.get_num().fits_slong_p() && s.get_den().fits_slong_p();
    EXPECT_EQ((a * b).is_small(), fits);
  }
}

TEST(RationalProperty, OverflowNearInt64Limits) {
  const std::int64_t m = std::numeric_limits<std::int64_t>::max();
  Rational a(m), b(m - 1, m);
  EXPECT_EQ(q(a + a), q(a) + q(a));
  EXPECT_EQ(q(a * a), q(a) * q(a));
  EXPECT_EQ(q(b + b), q(b) + q(b));
  EXPECT_EQ(q(-a - a), -q(a) - q(a));
  EXPECT_EQ(q(Rational(std::numeric_limits<std::int64_t>::min()) - Rational(1)),
            mpq_class(mpz_class("-9223372036854775809")));
}

TEST(RationalProperty, CopiesAreIndependent) {
  Rational a = Rational::pow2(90);
  Rational b = a;
  b += Rational(1);
  EXPECT_NE(a, b);
  EXPECT_EQ(q(b) - q(a), 1);
}

}  // namespace
}  // namespace pcdiff
