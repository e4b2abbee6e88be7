#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace pcdiff {

// Exact rational number. Values whose reduced numerator and denominator fit
// in int64 are stored inline; anything larger lives in a GMP mpq on the heap.
// The representation is canonical: a value is big only when it cannot be small.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  Rational(const Rational& o);
  Rational(Rational&& o) noexcept;
  Rational& operator=(const Rational& o);
  Rational& operator=(Rational&& o) noexcept;
  ~Rational();

  // Accepts "7", "-3/4", "0.125", "1e-3", "2.5e2".
  static Rational parse(std::string_view text);
  static Rational pow2(int exponent);
  // Exact binary value of a finite double.
  static Rational from_double(double v);

  bool is_small() const { return !big_; }
  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;

  Rational reciprocal() const;
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational floor() const;
  Rational ceil() const;
  // Largest e with 2^e <= |x|. Requires x != 0.
  int floor_log2() const;
  Rational pow(unsigned exponent) const;

  double to_double() const;
  // "n" for integers, "n/d" otherwise.
  std::string str() const;
  std::string numerator_str() const;
  std::string denominator_str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  struct Big;
  struct BigDeleter {
    void operator()(Big* p) const noexcept;
  };
  using BigPtr = std::unique_ptr<Big, BigDeleter>;

 private:
  explicit Rational(BigPtr big);
  void normalize_big();
  BigPtr to_big() const;

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  BigPtr big_;

  friend struct RationalAccess;
};

std::string to_string(const Rational& r);

}  // namespace pcdiff
