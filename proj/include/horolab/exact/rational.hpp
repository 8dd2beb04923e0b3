#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "horolab/error.hpp"

namespace horolab {

using Integer = mpz_class;

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
  Rational(T v) : v_(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) fail(ErrorKind::InvalidArgument, "rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  /// Parses "num/den" or "num" in decimal.
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(Integer(s));
      return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      fail(ErrorKind::SyntaxError, "not a rational literal: '" + s + "'");
    }
  }

  Integer num() const { return v_.get_num(); }
  Integer den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  double to_double() const { return v_.get_d(); }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) fail(ErrorKind::InvalidArgument, "division by zero rational");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) {
    return os << q.str();
  }

 private:
  mpq_class v_{0};
};

inline bool is_zero(const Rational& q) { return q.is_zero(); }
inline bool is_zero(const Integer& n) { return n == 0; }

namespace detail {
// unqualified call so that is_zero overloads of later coefficient types are found by ADL
template <class T>
bool entry_is_zero(const T& x) {
  return is_zero(x);
}
}  // namespace detail

inline Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

inline Rational pow(const Rational& q, unsigned long e) {
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), q.num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), q.den().get_mpz_t(), e);
  return Rational(n, d);
}

/// Natural log of |n| without overflow, for arbitrarily large n != 0.
inline double log_abs(const Integer& n) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline bool is_prime(unsigned long p) {
  if (p < 2) return false;
  Integer n(p);
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

inline bool is_prime(const Integer& n) { return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

/// Sieve of Eratosthenes.
inline std::vector<unsigned long> primes_up_to(unsigned long bound) {
  std::vector<unsigned long> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (unsigned long i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (unsigned long j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

/// Exponent of p in a non-zero integer.
inline long padic_valuation(const Integer& n, unsigned long p) {
  if (n == 0) fail(ErrorKind::UndefinedValuation, "p-adic valuation of zero");
  if (p < 2) fail(ErrorKind::InvalidArgument, "valuation base must be prime");
  Integer m = n;
  return static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), Integer(p).get_mpz_t()));
}

/// v with q = p^v * u, u a p-adic unit.
inline long padic_valuation(const Rational& q, unsigned long p) {
  if (q.is_zero()) fail(ErrorKind::UndefinedValuation, "p-adic valuation of zero");
  if (!is_prime(p)) fail(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
  return padic_valuation(q.num(), p) - padic_valuation(q.den(), p);
}

/// v_p(i!) by Legendre's formula.
inline std::uint64_t factorial_valuation(std::uint64_t i, std::uint64_t p) {
  if (p < 2) fail(ErrorKind::InvalidArgument, "valuation base must be prime");
  std::uint64_t v = 0;
  while (i > 0) {
    i /= p;
    v += i;
  }
  return v;
}

/// Logarithmic height log max(|num|, |den|).
struct Height {
  double value = 0.0;

  friend bool operator<(const Height& a, const Height& b) { return a.value < b.value; }
};

inline Height height(const Rational& q) {
  if (q.is_zero()) return {0.0};
  return {std::max(log_abs(q.num()), log_abs(q.den()))};
}

inline Height height(const Integer& n) {
  if (n == 0) return {0.0};
  return {log_abs(n)};
}

template <class Range>
Height vector_height(const Range& xs) {
  Height h;
  for (const auto& x : xs) h.value = std::max(h.value, height(x).value);
  return h;
}

}  // namespace horolab

template <>
struct std::hash<horolab::Rational> {
  std::size_t operator()(const horolab::Rational& q) const noexcept {
    return std::hash<std::string>{}(q.str());
  }
};
