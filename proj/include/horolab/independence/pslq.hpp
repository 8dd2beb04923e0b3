#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "horolab/exact/rational.hpp"
#include "horolab/independence/constants.hpp"

namespace horolab {

struct PslqResult {
  enum class Status { Found, NoneWithinBound, PrecisionExhausted };
  Status status = Status::NoneWithinBound;
  std::vector<Integer> relation;  // when Found
  double norm_bound = 0;          // every relation has Euclidean norm >= this
  std::size_t iterations = 0;
};

namespace detail {

inline Integer to_integer(const BigFloat& v) {
  Integer out;
  mpfr_get_z(out.get_mpz_t(), v.backend().data(), MPFR_RNDN);
  return out;
}

}  // namespace detail

/// PSLQ integer relation search (Ferguson-Bailey, gamma = sqrt(4/3)) on x at
/// the current BigFloat precision of `digits`. Stops when a relation appears,
/// when no relation of Euclidean norm <= max_norm can exist, or when the
/// multiplier matrix outgrows the precision.
inline PslqResult pslq(std::vector<BigFloat> x, unsigned digits, double max_norm, std::size_t max_iter = 100000) {
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorKind::InvalidArgument, "PSLQ needs at least two values");
  PrecisionGuard guard(digits);
  using std::size_t;
  const BigFloat gamma = boost::multiprecision::sqrt(BigFloat(4) / 3);
  const BigFloat eps = boost::multiprecision::pow(BigFloat(10), -static_cast<int>(digits * 3 / 4));
  const BigFloat overflow = boost::multiprecision::pow(BigFloat(10), static_cast<int>(digits * 3 / 4));

  PslqResult res;
  // a zero coordinate is itself a relation
  for (size_t i = 0; i < n; ++i)
    if (boost::multiprecision::abs(x[i]) < eps) {
      res.status = PslqResult::Status::Found;
      res.relation.assign(n, Integer(0));
      res.relation[i] = 1;
      return res;
    }

  std::vector<BigFloat> s(n), y(n);
  for (size_t k = n; k-- > 0;) s[k] = x[k] * x[k] + (k + 1 < n ? s[k + 1] : BigFloat(0));
  for (auto& v : s) v = boost::multiprecision::sqrt(v);
  const BigFloat t0 = s[0];
  for (size_t k = 0; k < n; ++k) {
    y[k] = x[k] / t0;
    s[k] /= t0;
  }
  std::vector<std::vector<BigFloat>> h(n, std::vector<BigFloat>(n - 1, BigFloat(0)));
  for (size_t j = 0; j + 1 < n; ++j) {
    h[j][j] = s[j + 1] / s[j];
    for (size_t i = j + 1; i < n; ++i) h[i][j] = -y[i] * y[j] / (s[j] * s[j + 1]);
  }
  std::vector<std::vector<BigFloat>> a(n, std::vector<BigFloat>(n, BigFloat(0))), b = a;
  for (size_t i = 0; i < n; ++i) a[i][i] = b[i][i] = 1;

  auto reduce_row = [&](size_t i, size_t jmax) {
    for (size_t j = jmax + 1; j-- > 0;) {
      if (h[j][j] == 0) continue;
      BigFloat t = boost::multiprecision::round(h[i][j] / h[j][j]);
      if (t == 0) continue;
      y[j] += t * y[i];
      for (size_t k = 0; k <= j; ++k) h[i][k] -= t * h[j][k];
      for (size_t k = 0; k < n; ++k) {
        a[i][k] -= t * a[j][k];
        b[k][j] += t * b[k][i];
      }
    }
  };
  for (size_t i = 1; i < n; ++i) reduce_row(i, i - 1);

  for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
    size_t r = 0;
    BigFloat best = -1, g = gamma;
    for (size_t j = 0; j + 1 < n; ++j, g *= gamma) {
      BigFloat v = g * boost::multiprecision::abs(h[j][j]);
      if (v > best) {
        best = v;
        r = j;
      }
    }
    std::swap(y[r], y[r + 1]);
    std::swap(a[r], a[r + 1]);
    std::swap(h[r], h[r + 1]);
    for (size_t k = 0; k < n; ++k) std::swap(b[k][r], b[k][r + 1]);
    if (r + 2 < n) {
      BigFloat c0 = boost::multiprecision::sqrt(h[r][r] * h[r][r] + h[r][r + 1] * h[r][r + 1]);
      BigFloat c1 = h[r][r] / c0, c2 = h[r][r + 1] / c0;
      for (size_t i = r; i < n; ++i) {
        BigFloat u = h[i][r], v = h[i][r + 1];
        h[i][r] = c1 * u + c2 * v;
        h[i][r + 1] = -c2 * u + c1 * v;
      }
    }
    for (size_t i = r + 1; i < n; ++i) reduce_row(i, std::min(i - 1, r + 1));

    BigFloat hmax = 0, amax = 0;
    for (size_t j = 0; j + 1 < n; ++j) hmax = std::max(hmax, BigFloat(boost::multiprecision::abs(h[j][j])));
    for (const auto& row : a)
      for (const auto& v : row) amax = std::max(amax, BigFloat(boost::multiprecision::abs(v)));
    res.norm_bound = hmax > 0 ? static_cast<double>(BigFloat(1 / hmax)) : HUGE_VAL;

    for (size_t j = 0; j < n; ++j)
      if (boost::multiprecision::abs(y[j]) < eps) {
        res.status = PslqResult::Status::Found;
        for (size_t k = 0; k < n; ++k) res.relation.push_back(detail::to_integer(b[k][j]));
        return res;
      }
    if (amax > overflow) {
      res.status = PslqResult::Status::PrecisionExhausted;
      return res;
    }
    if (res.norm_bound > max_norm) {
      res.status = PslqResult::Status::NoneWithinBound;
      return res;
    }
  }
  res.status = PslqResult::Status::PrecisionExhausted;
  return res;
}

}  // namespace horolab
