#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "horolab/exact/rational_function.hpp"

namespace horolab {

/// Power series sum_k c_k (z - base)^k known exactly up to k = T.
class TruncatedSeries {
 public:
  TruncatedSeries() : coeffs_(1, Rational(0)) {}
  TruncatedSeries(Rational base, std::vector<Rational> coeffs)
      : base_(std::move(base)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) fail(ErrorKind::InvalidArgument, "series needs at least one coefficient");
  }

  static TruncatedSeries zero(const Rational& base, std::size_t order) {
    return {base, std::vector<Rational>(order + 1, Rational(0))};
  }

  /// Re-expansion of a polynomial around `base`, truncated at `order`.
  static TruncatedSeries from_polynomial(const QPoly& p, const Rational& base, std::size_t order) {
    QPoly s = p.shifted(base);
    std::vector<Rational> c(order + 1, Rational(0));
    for (std::size_t k = 0; k <= order; ++k) c[k] = s[k];
    return {base, std::move(c)};
  }

  const Rational& base_point() const { return base_; }
  std::size_t order() const { return coeffs_.size() - 1; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  const Rational& operator[](std::size_t k) const { return coeffs_.at(k); }

  TruncatedSeries truncated(std::size_t order) const {
    if (order > this->order()) fail(ErrorKind::InsufficientTruncation, "cannot extend a truncated series");
    return {base_, std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + static_cast<long>(order) + 1)};
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.is_zero(); });
  }

  /// Index of the first non-zero coefficient; nullopt when saturated at T.
  std::optional<std::size_t> vanishing_order() const {
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      if (!coeffs_[k].is_zero()) return k;
    return std::nullopt;
  }

  TruncatedSeries derivative() const {
    if (coeffs_.size() == 1) return zero(base_, 0);
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = Rational(static_cast<long>(k)) * coeffs_[k];
    return {base_, std::move(d)};
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_compatible(a, b);
    std::size_t n = std::min(a.coeffs_.size(), b.coeffs_.size());
    std::vector<Rational> c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = a.coeffs_[k] + b.coeffs_[k];
    return {a.base_, std::move(c)};
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a + (Rational(-1) * b);
  }
  friend TruncatedSeries operator*(const Rational& s, TruncatedSeries a) {
    for (auto& c : a.coeffs_) c *= s;
    return a;
  }
  /// Cauchy product, truncated to the shorter operand.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    check_compatible(a, b);
    std::size_t n = std::min(a.coeffs_.size(), b.coeffs_.size());
    std::vector<Rational> c(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return {a.base_, std::move(c)};
  }
  friend TruncatedSeries operator*(const QPoly& p, const TruncatedSeries& a) {
    return from_polynomial(p, a.base_, a.order()) * a;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.base_ == b.base_ && a.coeffs_ == b.coeffs_;
  }

  /// Value of the truncation at base + offset, in a caller-chosen numeric type.
  template <class T, class Convert>
  T evaluate_offset(const T& offset, Convert&& conv) const {
    T acc = T(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * offset + conv(*it);
    return acc;
  }

 private:
  static void check_compatible(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.base_ != b.base_)
      fail(ErrorKind::PairingMismatch, "series at different base points " + a.base_.str() + " and " + b.base_.str());
  }

  Rational base_{0};
  std::vector<Rational> coeffs_;
};

/// Series quotient a/b; b must have a non-zero constant term.
inline TruncatedSeries series_divide(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (b[0].is_zero()) fail(ErrorKind::ExpansionAtPole, "series division by a non-unit");
  std::size_t n = std::min(a.order(), b.order()) + 1;
  std::vector<Rational> q(n, Rational(0));
  Rational inv = Rational(1) / b[0];
  for (std::size_t k = 0; k < n; ++k) {
    Rational acc = a[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
    q[k] = acc * inv;
  }
  return {a.base_point(), std::move(q)};
}

/// First T+1 Taylor coefficients of f at `base`.
inline TruncatedSeries taylor_expand(const RationalFunction& f, const Rational& base, std::size_t order) {
  if (f.has_pole_at(base))
    fail(ErrorKind::ExpansionAtPole, "cannot expand " + f.str() + " at its pole " + base.str());
  auto num = TruncatedSeries::from_polynomial(f.num(), base, order);
  auto den = TruncatedSeries::from_polynomial(f.den(), base, order);
  return series_divide(num, den);
}

}  // namespace horolab
