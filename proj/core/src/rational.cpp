#include "pcdiff/rational.hpp"

#include <gmpxx.h>

#include <bit>
#include <cctype>
#include <limits>

#include "pcdiff/errors.hpp"

namespace pcdiff {

struct Rational::Big {
  mpq_class q;
};

void Rational::BigDeleter::operator()(Big* p) const noexcept { delete p; }

namespace {

template <class... A>
Rational::BigPtr make_big(A&&... a) {
  return Rational::BigPtr(new Rational::Big{std::forward<A>(a)...});
}

}  // namespace

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(i128 v) { return v >= -static_cast<i128>(kMax) && v <= static_cast<i128>(kMax); }

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  u128 u = uabs(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

mpq_class small_to_mpq(std::int64_t n, std::int64_t d) {
  mpq_class q(mpz_class(static_cast<long>(n)), mpz_class(static_cast<long>(d)));
  return q;
}

}  // namespace

struct RationalAccess {
  // Builds a Rational from an unreduced 128-bit fraction with den > 0.
  static Rational from128(i128 n, i128 d) {
    if (n == 0) return Rational();
    u128 g = gcd128(uabs(n), static_cast<u128>(d));
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
    if (fits(n) && fits(d)) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
    auto big = make_big();
    big->q = mpq_class(to_mpz(n), to_mpz(d));
    return Rational(std::move(big));
  }
  static const mpq_class& q(const Rational& r) { return r.big_->q; }
};

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  i128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  *this = RationalAccess::from128(n, d);
}

Rational::Rational(BigPtr big) : big_(std::move(big)) { normalize_big(); }

Rational::Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
  if (o.big_) big_ = make_big(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
  if (this == &o) return *this;
  num_ = o.num_;
  den_ = o.den_;
  big_ = o.big_ ? make_big(*o.big_) : nullptr;
  return *this;
}

Rational::~Rational() = default;
Rational::Rational(Rational&& o) noexcept = default;
Rational& Rational::operator=(Rational&& o) noexcept = default;

void Rational::normalize_big() {
  if (!big_) return;
  big_->q.canonicalize();
  const mpz_class& n = big_->q.get_num();
  const mpz_class& d = big_->q.get_den();
  if (n.fits_slong_p() && d.fits_slong_p()) {
    long nn = n.get_si();
    if (nn != std::numeric_limits<long>::min()) {
      num_ = nn;
      den_ = d.get_si();
      big_.reset();
    }
  }
}

Rational::BigPtr Rational::to_big() const {
  auto b = make_big();
  b->q = big_ ? big_->q : small_to_mpq(num_, den_);
  return b;
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw DomainError("empty rational literal");

  auto bad = [&]() { return DomainError("malformed rational literal '" + std::string(text) + "'"); };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class n, d;
    if (n.set_str(s.substr(0, slash), 10) != 0 || d.set_str(s.substr(slash + 1), 10) != 0) throw bad();
    if (d == 0) throw DomainError("rational with zero denominator");
    auto b = make_big();
    b->q = mpq_class(n, d);
    return Rational(std::move(b));
  }

  // decimal with optional exponent
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac = 0;
  bool seen_dot = false, any = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any = true;
      if (seen_dot) ++frac;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw bad();
  long exp10 = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw bad();
    std::string e = s.substr(i + 1);
    if (e.empty()) throw bad();
    std::size_t used = 0;
    try {
      exp10 = std::stol(e, &used);
    } catch (...) {
      throw bad();
    }
    if (used != e.size() || exp10 > 4000 || exp10 < -4000) throw bad();
  }
  mpz_class mant(digits, 10);
  if (neg) mant = -mant;
  long shift = exp10 - frac;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  auto b = make_big();
  b->q = shift >= 0 ? mpq_class(mant * p10) : mpq_class(mant, p10);
  return Rational(std::move(b));
}

Rational Rational::pow2(int exponent) {
  if (exponent >= 0 && exponent < 62) return Rational(std::int64_t{1} << exponent);
  if (exponent < 0 && exponent > -62) return Rational(1, std::int64_t{1} << -exponent);
  mpz_class p = 1;
  p <<= static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  auto b = make_big();
  b->q = exponent >= 0 ? mpq_class(p) : mpq_class(mpz_class(1), p);
  return Rational(std::move(b));
}

Rational Rational::from_double(double v) {
  if (v != v || v == std::numeric_limits<double>::infinity() || v == -std::numeric_limits<double>::infinity())
    throw DomainError("non-finite double has no rational value");
  auto b = make_big();
  mpq_set_d(b->q.get_mpq_t(), v);
  return Rational(std::move(b));
}

int Rational::sign() const {
  if (big_) return sgn(big_->q);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const { return big_ ? big_->q.get_den() == 1 : den_ == 1; }

Rational Rational::reciprocal() const {
  if (is_zero()) throw DomainError("reciprocal of zero");
  if (!big_) return num_ < 0 ? Rational(-den_, -num_) : Rational(den_, num_);
  auto b = make_big();
  mpq_inv(b->q.get_mpq_t(), big_->q.get_mpq_t());
  return Rational(std::move(b));
}

Rational Rational::floor() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return Rational(q);
  }
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), big_->q.get_num_mpz_t(), big_->q.get_den_mpz_t());
  auto b = make_big();
  b->q = mpq_class(r);
  return Rational(std::move(b));
}

Rational Rational::ceil() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return Rational(q);
  }
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), big_->q.get_num_mpz_t(), big_->q.get_den_mpz_t());
  auto b = make_big();
  b->q = mpq_class(r);
  return Rational(std::move(b));
}

int Rational::floor_log2() const {
  if (is_zero()) throw DomainError("floor_log2 of zero");
  Rational a = abs();
  int k;
  if (!a.big_) {
    k = std::bit_width(static_cast<std::uint64_t>(a.num_)) - std::bit_width(static_cast<std::uint64_t>(a.den_));
  } else {
    k = static_cast<int>(mpz_sizeinbase(a.big_->q.get_num_mpz_t(), 2)) -
        static_cast<int>(mpz_sizeinbase(a.big_->q.get_den_mpz_t(), 2));
  }
  // 2^(k-1) < a < 2^(k+1)
  return a >= pow2(k) ? k : k - 1;
}

Rational Rational::pow(unsigned exponent) const {
  Rational result(1), base(*this);
  while (exponent) {
    if (exponent & 1u) result *= base;
    exponent >>= 1;
    if (exponent) base *= base;
  }
  return result;
}

double Rational::to_double() const {
  if (!big_) return static_cast<double>(num_) / static_cast<double>(den_);
  return big_->q.get_d();
}

std::string Rational::str() const {
  if (!big_) return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  return big_->q.get_str(10);
}

std::string Rational::numerator_str() const { return big_ ? big_->q.get_num().get_str(10) : std::to_string(num_); }

std::string Rational::denominator_str() const { return big_ ? big_->q.get_den().get_str(10) : std::to_string(den_); }

Rational Rational::operator-() const {
  if (!big_) {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  auto b = make_big();
  b->q = -big_->q;
  return Rational(std::move(b));
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
    i128 d = static_cast<i128>(den_) * o.den_;
    return *this = RationalAccess::from128(n, d);
  }
  auto b = to_big();
  b->q += o.big_ ? o.big_->q : small_to_mpq(o.num_, o.den_);
  return *this = Rational(std::move(b));
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    i128 n = static_cast<i128>(num_) * o.num_;
    i128 d = static_cast<i128>(den_) * o.den_;
    return *this = RationalAccess::from128(n, d);
  }
  auto b = to_big();
  b->q *= o.big_ ? o.big_->q : small_to_mpq(o.num_, o.den_);
  return *this = Rational(std::move(b));
}

Rational& Rational::operator/=(const Rational& o) { return *this *= o.reciprocal(); }

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return a.big_->q == b.big_->q;
  return false;  // canonical form: a big value never equals a small one
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    i128 l = static_cast<i128>(a.num_) * b.den_;
    i128 r = static_cast<i128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  mpq_class qa = a.big_ ? a.big_->q : small_to_mpq(a.num_, a.den_);
  mpq_class qb = b.big_ ? b.big_->q : small_to_mpq(b.num_, b.den_);
  int c = cmp(qa, qb);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string to_string(const Rational& r) { return r.str(); }

}  // namespace pcdiff
