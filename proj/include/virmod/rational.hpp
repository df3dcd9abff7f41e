#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "virmod/error.hpp"

namespace virmod {

/// Exact rational number in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in 64 bits are stored inline
/// and combined through 128-bit intermediates; anything larger is promoted
/// to a shared, immutable GMP `mpq_class` and demoted again whenever a
/// result fits. Copies are cheap and values never change after construction.
class Rational {
 public:
  Rational() = default;

  template <std::signed_integral I>
  Rational(I v) : num_(static_cast<std::int64_t>(v)) {}  // NOLINT: implicit by design of a scalar type

  template <std::unsigned_integral I>
  Rational(I v) {  // NOLINT
    if (static_cast<unsigned long long>(v) <= static_cast<unsigned long long>(INT64_MAX)) {
      num_ = static_cast<std::int64_t>(v);
    } else {
      *this = from_mpq(mpq_class(mpz_class(std::to_string(v))));
    }
  }

  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw precondition_error("rational with zero denominator");
    *this = from_i128(num, den);
  }

  explicit Rational(const mpq_class& q) : Rational(from_mpq(q)) {}

  /// Parses "p", "-p" or "p/q" (surrounding whitespace allowed).
  static Rational parse(std::string_view text) {
    auto b = text.find_first_not_of(" \t\r\n");
    auto e = text.find_last_not_of(" \t\r\n");
    if (b == std::string_view::npos) throw parse_error("empty rational", 0);
    std::string_view s = text.substr(b, e - b + 1);
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{} : s.substr(slash + 1);
    auto digits = [&](std::string_view d, bool allow_sign, std::size_t offset) {
      std::size_t i = 0;
      if (allow_sign && !d.empty() && (d[0] == '-' || d[0] == '+')) ++i;
      if (i == d.size()) throw parse_error("expected digits in rational '" + std::string(s) + "'", b + offset + i);
      for (; i < d.size(); ++i) {
        if (d[i] < '0' || d[i] > '9')
          throw parse_error("unexpected character in rational '" + std::string(s) + "'", b + offset + i);
      }
    };
    digits(num, true, 0);
    std::string n(num);
    if (!n.empty() && n[0] == '+') n.erase(0, 1);
    mpz_class zn(n);
    mpz_class zd(1);
    if (slash != std::string_view::npos) {
      digits(den, false, slash + 1);
      zd = mpz_class(std::string(den));
      if (zd == 0) throw parse_error("zero denominator in '" + std::string(s) + "'", b + slash + 1);
    }
    mpq_class q(zn, zd);
    q.canonicalize();
    return from_mpq(q);
  }

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
  int sign() const {
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
  }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    mpq_class q;
    mpz_set_si(q.get_num_mpz_t(), num_);
    mpz_set_si(q.get_den_mpz_t(), den_);
    return q;
  }

  mpz_class numerator() const { return to_mpq().get_num(); }
  mpz_class denominator() const { return to_mpq().get_den(); }

  std::string to_string() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const {
    if (big_) return from_mpq(-*big_);
    if (num_ == INT64_MIN) return from_i128(-static_cast<__int128>(num_), den_);
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t n;
        if (!__builtin_add_overflow(a.num_, b.num_, &n)) return from_small(n, 1);
      }
      if (small32(a) && small32(b)) {
        std::int64_t n = a.num_ * b.den_ + b.num_ * a.den_, d = a.den_ * b.den_;
        std::int64_t g = std::gcd(n, d);
        return from_small(n / g, d / g);
      }
      __int128 g = gcd128(a.den_, b.den_);
      __int128 ad = a.den_ / g, bd = b.den_ / g;
      __int128 n = static_cast<__int128>(a.num_) * bd + static_cast<__int128>(b.num_) * ad;
      __int128 d = ad * b.den_;
      return from_i128(n, d);
    }
    return from_mpq(a.to_mpq() + b.to_mpq());
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return {};
      if (a.den_ == 1 && b.den_ == 1) {
        std::int64_t n;
        if (!__builtin_mul_overflow(a.num_, b.num_, &n)) return from_small(n, 1);
      }
      if (small32(a) && small32(b)) {
        std::int64_t g1 = std::gcd(a.num_, b.den_), g2 = std::gcd(b.num_, a.den_);
        return from_small((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
      }
      __int128 g1 = gcd128(a.num_, b.den_), g2 = gcd128(b.num_, a.den_);
      __int128 n = (a.num_ / g1) * (b.num_ / g2);
      __int128 d = (a.den_ / g2) * (b.den_ / g1);
      return from_reduced_i128(n, d);
    }
    return from_mpq(a.to_mpq() * b.to_mpq());
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw precondition_error("rational division by zero");
    return a * b.inverse();
  }

  Rational inverse() const {
    if (is_zero()) throw precondition_error("inverse of zero");
    if (big_) return from_mpq(1 / *big_);
    return from_i128(den_, num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical form: a big value never equals a small one
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      __int128 l = static_cast<__int128>(a.num_) * b.den_;
      __int128 r = static_cast<__int128>(b.num_) * a.den_;
      return l <=> r;
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

  std::size_t hash() const {
    if (!big_) return std::hash<std::int64_t>{}(num_) * 31 + std::hash<std::int64_t>{}(den_);
    return std::hash<std::string>{}(big_->get_str());
  }

 private:
  static __int128 abs128(__int128 x) { return x < 0 ? -x : x; }

  static __int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static bool small32(const Rational& r) {
    return r.num_ > -(std::int64_t{1} << 31) && r.num_ < (std::int64_t{1} << 31) && r.den_ < (std::int64_t{1} << 31);
  }

  static Rational from_small(std::int64_t n, std::int64_t d) {
    Rational r;
    if (n == 0) return r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }

  static bool fits64(__int128 x) { return x >= INT64_MIN && x <= INT64_MAX; }

  static mpz_class to_mpz(__int128 x) {
    bool neg = x < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
    mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
  }

  static Rational from_i128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    return from_reduced_i128(n, d);
  }

  static Rational from_reduced_i128(__int128 n, __int128 d) {
    if (n == 0) return {};
    if (fits64(n) && fits64(d)) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(n);
      r.den_ = static_cast<std::int64_t>(d);
      return r;
    }
    mpq_class q(to_mpz(n), to_mpz(d));
    q.canonicalize();
    return from_mpq(q);
  }

  static Rational from_mpq(const mpq_class& q) {
    Rational r;
    if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
      r.num_ = mpz_get_si(q.get_num_mpz_t());
      r.den_ = mpz_get_si(q.get_den_mpz_t());
      return r;
    }
    r.big_ = std::make_shared<const mpq_class>(q);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

/// x^e for any integer e; negative exponents require x != 0.
inline Rational pow(Rational x, long long e) {
  if (e < 0) {
    x = x.inverse();
    e = -e;
  }
  Rational r(1);
  while (e > 0) {
    if (e & 1) r *= x;
    e >>= 1;
    if (e) x *= x;
  }
  return r;
}

inline Rational factorial(unsigned n) {
  Rational r(1);
  for (unsigned i = 2; i <= n; ++i) r *= Rational(i);
  return r;
}

/// C(n, k), zero outside 0 <= k <= n.
inline Rational binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return {};
  Rational r(1);
  for (long long i = 1; i <= k; ++i) r = r * Rational(n - k + i) / Rational(i);
  return r;
}

}  // namespace virmod

template <>
struct std::hash<virmod::Rational> {
  std::size_t operator()(const virmod::Rational& r) const { return r.hash(); }
};
