#pragma once

#include <algorithm>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "horolab/exact/rational.hpp"

namespace horolab {

/// Dense univariate polynomial, coefficients ascending in degree. The zero
/// polynomial has no stored coefficients and degree -1.
template <class R = Rational>
class Polynomial {
 public:
  using coefficient_type = R;

  Polynomial() = default;
  Polynomial(const R& c) : c_{c} { trim(); }  // NOLINT(google-explicit-constructor)
  template <std::integral T>
  Polynomial(T c) : Polynomial(R(c)) {}  // NOLINT(google-explicit-constructor)
  explicit Polynomial(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }

  static Polynomial variable() { return Polynomial(std::vector<R>{R(0), R(1)}); }
  static Polynomial monomial(const R& c, std::size_t deg) {
    std::vector<R> v(deg + 1, R(0));
    v[deg] = c;
    return Polynomial(std::move(v));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<R>& coefficients() const { return c_; }

  R operator[](std::size_t k) const { return k < c_.size() ? c_[k] : R(0); }
  R leading() const { return c_.empty() ? R(0) : c_.back(); }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<R> out(a.c_.size() + b.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::entry_is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(out));
  }
  friend Polynomial operator*(const R& s, Polynomial p) {
    for (auto& c : p.c_) c = s * c;
    p.trim();
    return p;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<R> out(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) out[k - 1] = R(static_cast<long>(k)) * c_[k];
    return Polynomial(std::move(out));
  }

  template <class T>
  T evaluate(const T& x) const {
    T acc = T(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }

  /// Evaluation with a coefficient conversion, e.g. into double or complex.
  template <class T, class Convert>
  T evaluate(const T& x, Convert&& conv) const {
    T acc = T(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + conv(*it);
    return acc;
  }

  R operator()(const R& x) const { return evaluate<R>(x); }

  /// Coefficients of p(base + t) as a polynomial in t.
  Polynomial shifted(const R& base) const {
    std::vector<R> a = c_;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = n - 1; j > i; --j) a[j - 1] += base * a[j];
    return Polynomial(std::move(a));
  }

  Polynomial compose(const Polynomial& inner) const {
    Polynomial acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Polynomial(*it);
    return acc;
  }

  std::string str(const std::string& var = "z") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (detail::entry_is_zero(c_[k])) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << c_[k] << ")";
      if (k >= 1) os << "*" << var;
      if (k >= 2) os << "^" << k;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && detail::entry_is_zero(c_.back())) c_.pop_back();
  }

  std::vector<R> c_;
};

template <class R>
bool is_zero(const Polynomial<R>& p) {
  return p.is_zero();
}

using QPoly = Polynomial<Rational>;

/// Euclidean division over a field: a = q*b + r with deg r < deg b.
template <class R>
std::pair<Polynomial<R>, Polynomial<R>> divmod(const Polynomial<R>& a, const Polynomial<R>& b) {
  if (b.is_zero()) fail(ErrorKind::InvalidArgument, "polynomial division by zero");
  std::vector<R> rem = a.coefficients();
  const int db = b.degree();
  if (a.degree() < db) return {Polynomial<R>(), a};
  std::vector<R> quo(static_cast<std::size_t>(a.degree() - db + 1), R(0));
  const R lead = b.leading();
  for (int k = a.degree(); k >= db; --k) {
    R coef = rem[static_cast<std::size_t>(k)] / lead;
    quo[static_cast<std::size_t>(k - db)] = coef;
    if (detail::entry_is_zero(coef)) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= coef * b[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Polynomial<R>(std::move(quo)), Polynomial<R>(std::move(rem))};
}

template <class R>
Polynomial<R> make_monic(const Polynomial<R>& p) {
  if (p.is_zero()) return p;
  return (R(1) / p.leading()) * p;
}

template <class R>
Polynomial<R> gcd(Polynomial<R> a, Polynomial<R> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

/// Division known to be exact; throws if a remainder appears.
template <class R>
Polynomial<R> exact_div(const Polynomial<R>& a, const Polynomial<R>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) fail(ErrorKind::InvalidArgument, "polynomial division is not exact");
  return q;
}

/// Lowest index with a non-zero coefficient; -1 for the zero polynomial.
template <class R>
int low_order(const Polynomial<R>& p) {
  for (std::size_t k = 0; k < p.coefficients().size(); ++k)
    if (!detail::entry_is_zero(p.coefficients()[k])) return static_cast<int>(k);
  return -1;
}

/// Integer primitive part: scales p by a rational so that all coefficients are
/// coprime integers and the leading coefficient is positive. Returns the scale.
inline Rational primitive_scale(const QPoly& p) {
  if (p.is_zero()) return Rational(1);
  Integer l = 1, g = 0;
  for (const auto& c : p.coefficients()) {
    if (c.is_zero()) continue;
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
  }
  for (const auto& c : p.coefficients()) {
    if (c.is_zero()) continue;
    Integer v = c.num() * (l / c.den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  Rational s(l, g);
  if (p.leading().sign() < 0) s = -s;
  return s;
}

/// Rational roots of a non-zero polynomial, by the rational root test on the
/// integer primitive part. Candidates are enumerated only when both the leading
/// and the trailing coefficient stay below `search_limit`; otherwise the root
/// list may be incomplete (caller tracks the leftover factor).
inline std::vector<std::pair<Rational, int>> rational_roots(const QPoly& p,
                                                            long search_limit = 1000000) {
  std::vector<std::pair<Rational, int>> roots;
  if (p.degree() <= 0) return roots;
  QPoly rest = primitive_scale(p) * p;
  // zero as a root
  int z0 = low_order(rest);
  if (z0 > 0) {
    roots.emplace_back(Rational(0), z0);
    std::vector<Rational> shifted(rest.coefficients().begin() + z0, rest.coefficients().end());
    rest = QPoly(std::move(shifted));
  }
  if (rest.degree() <= 0) return roots;
  Integer lead = abs(rest.leading().num());
  Integer trail = abs(rest[0].num());
  if (lead > search_limit || trail > search_limit) return roots;
  auto divisors = [](long n) {
    std::vector<long> d;
    for (long k = 1; k * k <= n; ++k)
      if (n % k == 0) {
        d.push_back(k);
        if (k != n / k) d.push_back(n / k);
      }
    return d;
  };
  std::vector<long> dl = divisors(lead.get_si()), dt = divisors(trail.get_si());
  std::vector<Rational> cands;
  for (long a : dt)
    for (long b : dl) {
      cands.emplace_back(Integer(a), Integer(b));
      cands.emplace_back(Integer(-a), Integer(b));
    }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  for (const auto& r : cands) {
    int mult = 0;
    QPoly lin{-r, Rational(1)};
    while (rest.degree() >= 1 && rest(r).is_zero()) {
      rest = exact_div(rest, lin);
      ++mult;
    }
    if (mult > 0) roots.emplace_back(r, mult);
  }
  std::sort(roots.begin(), roots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return roots;
}

}  // namespace horolab
