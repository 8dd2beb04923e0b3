#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "horolab/exact/factor.hpp"
#include "horolab/exact/series.hpp"

namespace horolab {

struct PrimeSlope {
  Integer prime;
  Rational slope;  // c_p
};

/// Finite-data certificate for the bound |a_i|_p <= C_p^i / |i!|_p^alpha.
/// On finite data every slope is finite, so the verdict is always "certified
/// to order T"; the content is the list of non-zero slopes.
struct LgCertificate {
  Rational alpha;
  std::vector<PrimeSlope> bad_primes;  // primes with c_p > 0, ascending
  std::size_t truncation_order = 0;
  /// First index at which the slope-free bound (all c_p = 0) fails, if any.
  std::optional<std::size_t> first_violation;

  bool clean() const { return bad_primes.empty(); }

  /// sum_p c_p log p, the logarithm of prod C_p over the bad primes.
  double slope_sum() const {
    double s = 0;
    for (const auto& b : bad_primes) s += b.slope.to_double() * log_abs(b.prime);
    return s;
  }
};

namespace detail {

inline long valuation(const Integer& n, const Integer& p) {
  Integer m = n;
  return static_cast<long>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
}

inline Rational factorial_valuation_big(std::size_t i, const Integer& p) {
  if (!p.fits_ulong_p()) return Rational(0);
  return Rational(static_cast<long>(factorial_valuation(i, p.get_ui())));
}

}  // namespace detail

/// Minimal slopes c_p = max(0, max_i (-v_p(a_i) - alpha v_p(i!)) / i), 1 <= i <= T,
/// over every prime dividing a coefficient denominator.
inline LgCertificate certify_lg(const std::vector<TruncatedSeries>& germs, const Rational& alpha) {
  if (germs.empty()) fail(ErrorKind::NoData, "no germs to certify");
  const std::size_t t = germs[0].order();
  for (const auto& g : germs)
    if (g.order() != t) fail(ErrorKind::DataError, "germs have different truncation orders");
  if (alpha.sign() < 0) fail(ErrorKind::InvalidArgument, "type alpha must be non-negative");

  Integer l = 1;
  for (const auto& g : germs)
    for (std::size_t i = 1; i <= t; ++i)
      if (!g[i].is_zero()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), g[i].den().get_mpz_t());

  LgCertificate cert;
  cert.alpha = alpha;
  cert.truncation_order = t;
  for (const auto& p : prime_divisors(l, std::max<unsigned long>(1000, 2 * t))) {
    Rational best(0);
    for (std::size_t i = 1; i <= t; ++i) {
      Rational fv = alpha * detail::factorial_valuation_big(i, p);
      for (const auto& g : germs) {
        const Rational& a = g[i];
        if (a.is_zero() || !mpz_divisible_p(a.den().get_mpz_t(), p.get_mpz_t())) continue;
        Rational excess = Rational(detail::valuation(a.den(), p)) - fv;
        if (excess.sign() > 0 && (!cert.first_violation || i < *cert.first_violation)) cert.first_violation = i;
        Rational slope = excess / Rational(static_cast<long>(i));
        if (best < slope) best = slope;
      }
    }
    if (best.sign() > 0) cert.bad_primes.push_back({p, best});
  }
  return cert;
}

/// Slope sums across increasing truncations. A genuine LG-germ of type alpha
/// has sums that stabilize; strict growth across the sweep is refutation
/// evidence (never a proof either way).
struct LgSweep {
  std::vector<std::size_t> orders;
  std::vector<double> slope_sums;
  std::vector<std::size_t> bad_prime_counts;
  bool growing = false;
  bool stable = false;
};

inline LgSweep lg_slope_sweep(const std::vector<TruncatedSeries>& germs, const Rational& alpha,
                              const std::vector<std::size_t>& orders) {
  LgSweep sw;
  for (std::size_t t : orders) {
    std::vector<TruncatedSeries> cut;
    for (const auto& g : germs) cut.push_back(g.truncated(t));
    auto c = certify_lg(cut, alpha);
    sw.orders.push_back(t);
    sw.slope_sums.push_back(c.slope_sum());
    sw.bad_prime_counts.push_back(c.bad_primes.size());
  }
  sw.growing = sw.slope_sums.size() >= 2;
  sw.stable = true;
  for (std::size_t k = 1; k < sw.slope_sums.size(); ++k) {
    if (!(sw.slope_sums[k] > sw.slope_sums[k - 1] + 1e-12)) sw.growing = false;
    if (std::fabs(sw.slope_sums[k] - sw.slope_sums[k - 1]) > 1e-12) sw.stable = false;
  }
  return sw;
}

struct GrowthEstimate {
  enum class Method { CoefficientOrder, Nevanlinna };
  double rho = 0;
  double fit_residual = 0;
  Method method = Method::CoefficientOrder;
};

/// Order of an entire germ from its coefficients. Fits
///   -log|a_n| = (1/rho) n log n + b n + c log n + d
/// over the non-zero upper half of the coefficients; the extra terms absorb
/// the Stirling corrections that bias the bare ratio n log n / -log|a_n|.
inline GrowthEstimate coefficient_growth_order(const TruncatedSeries& germ) {
  const std::size_t t = germ.order();
  if (t < 50) fail(ErrorKind::InsufficientTruncation, "growth order needs T >= 50");
  std::vector<std::size_t> idx;
  for (std::size_t n = std::max<std::size_t>(2, t / 2); n <= t; ++n)
    if (!germ[n].is_zero()) idx.push_back(n);
  if (idx.empty()) fail(ErrorKind::PolynomialInput, "all-zero coefficient tail: the germ is a polynomial (order 0)");
  if (idx.size() < 6) fail(ErrorKind::InsufficientTruncation, "too few non-zero tail coefficients for a fit");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(idx.size()), 4);
  Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    double n = static_cast<double>(idx[r]);
    const auto row = static_cast<Eigen::Index>(r);
    a(row, 0) = n * std::log(n);
    a(row, 1) = n;
    a(row, 2) = std::log(n);
    a(row, 3) = 1.0;
    y(row) = log_abs(germ[idx[r]].den()) - log_abs(germ[idx[r]].num());
  }
  // column scaling keeps the normal equations well conditioned
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  Eigen::MatrixXd as = a * scale.cwiseInverse().asDiagonal();
  Eigen::VectorXd sol = as.colPivHouseholderQr().solve(y);
  sol = sol.cwiseQuotient(scale);
  GrowthEstimate g;
  g.rho = sol(0) > 0 ? 1.0 / sol(0) : std::numeric_limits<double>::infinity();
  g.fit_residual = std::sqrt((a * sol - y).squaredNorm() / static_cast<double>(idx.size()));
  return g;
}

/// As above but reporting order 0 for polynomial germs.
inline GrowthEstimate growth_order_or_zero(const TruncatedSeries& germ) {
  try {
    return coefficient_growth_order(germ);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PolynomialInput) throw;
    return {};
  }
}

struct ESectionReport {
  bool accepted = false;
  double measured_rho = 0;
  double predicted_rho = 0;  // s / alpha
  double tolerance = 0.1;
  std::string text;
};

/// Balance condition: measured order equals s / alpha (K = Q, one archimedean place).
inline ESectionReport check_e_section(const LgCertificate& cert, const GrowthEstimate& growth, int s,
                                      double tolerance = 0.1) {
  if (s < 1) fail(ErrorKind::InvalidArgument, "number of points must be positive");
  if (cert.alpha.is_zero()) fail(ErrorKind::InvalidArgument, "balance needs alpha > 0");
  ESectionReport r;
  r.measured_rho = growth.rho;
  r.predicted_rho = static_cast<double>(s) / cert.alpha.to_double();
  r.tolerance = tolerance;
  r.accepted = std::fabs(r.measured_rho - r.predicted_rho) <= tolerance;
  r.text = "measured rho " + std::to_string(r.measured_rho) + " vs s/alpha " + std::to_string(r.predicted_rho) +
           (r.accepted ? " (balanced)" : " (unbalanced)");
  return r;
}

}  // namespace horolab
