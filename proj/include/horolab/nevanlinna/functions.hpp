#pragma once

#include <algorithm>
#include <functional>
#include <numeric>

#include <Eigen/Dense>

#include "horolab/auxiliary/constructor.hpp"
#include "horolab/exact/series.hpp"
#include "horolab/lg/certifier.hpp"
#include "horolab/nevanlinna/exhaustion.hpp"
#include "horolab/zero_lemma/tower.hpp"

namespace horolab {

/// An analytic map into the projective line, given by a branch of log f so
/// that maps like exp(z^2) can be sampled far beyond double range.
struct AnalyticMap {
  std::string name;
  std::function<Complex(Complex)> log_value;
};

inline AnalyticMap map_identity() {
  return {"z", [](Complex z) { return std::log(z); }};
}
inline AnalyticMap map_exp() {
  return {"exp(z)", [](Complex z) { return z; }};
}
inline AnalyticMap map_exp_square() {
  return {"exp(z^2)", [](Complex z) { return z * z; }};
}
inline AnalyticMap map_constant(Complex c) {
  return {"constant", [c](Complex) { return std::log(c); }};
}

/// Roots of c_0 + c_1 z + ... + c_n z^n from the companion matrix.
inline std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
  std::size_t n = c.size();
  while (n > 0 && c[n - 1] == Complex(0)) --n;
  if (n == 0) fail(ErrorKind::InvalidArgument, "zero polynomial has no root list");
  const auto deg = static_cast<Eigen::Index>(n - 1);
  if (deg == 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (Eigen::Index i = 1; i < deg; ++i) comp(i, i - 1) = 1;
  for (Eigen::Index i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c[n - 1];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  std::sort(out.begin(), out.end(),
            [](Complex a, Complex b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return out;
}

/// Polynomial map in factored form, so that log|f| stays finite for huge z.
inline AnalyticMap map_polynomial(const std::vector<Complex>& coeffs) {
  auto roots = polynomial_roots(coeffs);
  std::size_t n = coeffs.size();
  while (coeffs[n - 1] == Complex(0)) --n;
  const Complex lead = coeffs[n - 1];
  return {"polynomial", [roots, lead](Complex z) {
            Complex s = std::log(lead);
            for (const auto& a : roots) s += std::log(z - a);
            return s;
          }};
}

/// A truncated series read as the polynomial sum c_k (z - base)^k.
inline AnalyticMap map_from_series(const TruncatedSeries& f) {
  std::vector<Complex> c;
  for (std::size_t k = 0; k <= f.order(); ++k) c.emplace_back(f[k].to_double());
  auto p = map_polynomial(c);
  const double base = f.base_point().to_double();
  return {"series", [p, base](Complex z) { return p.log_value(z - base); }};
}

namespace detail {

// log(1 + |f|^2) from u = 2 Re log f without overflow.
inline double log1p_norm(double u) { return u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

// log|f - a|^2 from log f.
inline double log_norm_minus(Complex lf, Complex a) {
  if (a == Complex(0)) return 2 * lf.real();
  if (lf.real() > std::log(std::abs(a)) + 1) return 2 * lf.real() + std::log(std::norm(1.0 - a * std::exp(-lf)));
  return std::log(std::norm(std::exp(lf) - a));
}

}  // namespace detail

/// T(r) = 1/2 sum_k w_k log(1 + |f(z_k)|^2).
inline double characteristic(const AnalyticMap& f, const LevelCurve& curve) {
  double t = 0;
  for (const auto& s : curve.samples) t += s.weight * detail::log1p_norm(2 * f.log_value(s.z).real());
  return t / 2;
}

/// m(r) = 1/2 sum_k w_k log((1 + |f|^2)(1 + |a|^2) / |f - a|^2).
inline double proximity(const AnalyticMap& f, Complex a, const LevelCurve& curve) {
  double m = 0;
  const double la = std::log1p(std::norm(a));
  for (const auto& s : curve.samples) {
    const Complex lf = f.log_value(s.z);
    m += s.weight * (detail::log1p_norm(2 * lf.real()) + la - detail::log_norm_minus(lf, a));
  }
  return m / 2;
}

struct ZeroPoint {
  Complex z;
  int multiplicity = 1;
};

/// N(r) = 1/2 sum over zeros inside B(r) of n_z (level - g(z)). A zero at
/// the center contributes n_p * level / 2, which makes the Jensen identity
/// exact for D = {infinity}.
inline double counting(const std::vector<ZeroPoint>& zeros, const ExhaustionFunction& g, double r,
                       LevelConvention conv = LevelConvention::Calibrated) {
  const double level = level_of(r, conv);
  double n = 0;
  for (const auto& z : zeros) {
    if (z.z == g.center()) {
      n += z.multiplicity * level;
      continue;
    }
    const double v = g(z.z);
    if (v < level) n += z.multiplicity * (level - v);
  }
  return n / 2;
}

struct NevanlinnaRow {
  double r = 0, T = 0, N = 0, m = 0, residual = 0, mass = 0;
};

struct NevanlinnaReport {
  std::vector<NevanlinnaRow> rows;
  double residual_drift = 0;  // max |residual(r) - residual(r_0)|
  double max_mass_error = 0;
  bool monotone = true;       // T non-decreasing up to 1e-9
};

/// N + m - T over an r-grid for the target value a; by the first main
/// theorem the residual is constant, so drift exposes missing zeros.
inline NevanlinnaReport fmt_residual(const AnalyticMap& f, Complex a, const std::vector<ZeroPoint>& zeros_of_f_minus_a,
                                     const ExhaustionFunction& g, const std::vector<double>& rgrid,
                                     std::size_t n_samples, LevelConvention conv = LevelConvention::Calibrated) {
  if (rgrid.empty()) fail(ErrorKind::NoData, "empty r-grid");
  NevanlinnaReport rep;
  for (double r : rgrid) {
    auto curve = level_curve(g, r, n_samples, conv);
    NevanlinnaRow row;
    row.r = r;
    row.mass = curve.mass;
    row.T = characteristic(f, curve);
    row.m = proximity(f, a, curve);
    row.N = counting(zeros_of_f_minus_a, g, r, conv);
    row.residual = row.N + row.m - row.T;
    rep.max_mass_error = std::max(rep.max_mass_error, std::fabs(curve.mass - 1));
    if (!rep.rows.empty()) {
      rep.residual_drift = std::max(rep.residual_drift, std::fabs(row.residual - rep.rows[0].residual));
      if (row.T < rep.rows.back().T - 1e-9) rep.monotone = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

/// T(r) on a grid.
inline std::vector<double> characteristic_profile(const AnalyticMap& f, const ExhaustionFunction& g,
                                                  const std::vector<double>& rgrid, std::size_t n_samples,
                                                  LevelConvention conv = LevelConvention::Calibrated) {
  std::vector<double> t;
  for (double r : rgrid) t.push_back(characteristic(f, level_curve(g, r, n_samples, conv)));
  return t;
}

inline std::vector<double> log_grid(double rmin, double rmax, std::size_t steps) {
  if (!(rmin > 0) || !(rmax > rmin) || steps < 2) fail(ErrorKind::InvalidArgument, "need 0 < rmin < rmax and >= 2 steps");
  std::vector<double> out;
  for (std::size_t i = 0; i < steps; ++i)
    out.push_back(rmin * std::pow(rmax / rmin, static_cast<double>(i) / static_cast<double>(steps - 1)));
  return out;
}

/// Least-squares slope of log T against log r over the largest-r half.
inline GrowthEstimate growth_order_fit(const std::vector<double>& r, const std::vector<double>& t) {
  if (r.size() != t.size()) fail(ErrorKind::InvalidArgument, "r and T differ in length");
  if (r.size() < 8) fail(ErrorKind::InvalidArgument, "need at least 8 samples");
  std::vector<std::size_t> idx(r.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });
  if (!(r[idx.front()] > 0) || r[idx.back()] / r[idx.front()] < 100)
    fail(ErrorKind::InvalidArgument, "the r-grid must span at least two decades");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = idx.size() / 2; k < idx.size(); ++k)
    if (t[idx[k]] > 0) pts.emplace_back(std::log(r[idx[k]]), std::log(t[idx[k]]));
  if (pts.size() < 2) fail(ErrorKind::NoData, "fewer than two positive T values in the upper half");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    a(static_cast<Eigen::Index>(k), 0) = pts[k].first;
    a(static_cast<Eigen::Index>(k), 1) = 1;
    y(static_cast<Eigen::Index>(k)) = pts[k].second;
  }
  Eigen::VectorXd sol = a.colPivHouseholderQr().solve(y);
  GrowthEstimate g;
  g.method = GrowthEstimate::Method::Nevanlinna;
  g.rho = sol(0);
  g.fit_residual = std::sqrt((a * sol - y).squaredNorm() / static_cast<double>(pts.size()));
  return g;
}

/// log |sum_k c_k offset^k| computed exactly on the truncation.
inline double log_abs_partial_sum(const TruncatedSeries& f, const Rational& offset) {
  Rational s = f.evaluate_offset(offset, [](const Rational& c) { return c; });
  if (s.is_zero()) return -std::numeric_limits<double>::infinity();
  return log_abs(s.num()) - log_abs(s.den());
}

struct TwoPointInputs {
  std::optional<double> B;    // log sup |P|
  std::optional<double> A, b; // ord_{p1} F >= A x - b
  std::optional<double> rho;
  std::optional<double> c1, c2;
  double x = 0;
  double log_f_p2 = 0;        // measured log |F(p2)|
  std::optional<double> measured_order;
  double x_threshold = 4;
};

struct TwoPointReport {
  double r = 0;      // x^(1/rho)
  double lhs = 0;
  double rhs = 0;
  double margin = 0; // rhs - lhs
  bool hypothesis_met = true;
  bool asymptotic = true;
  std::string text;
};

/// log|F(p2)| <= B - (A x / rho) log x + c2 x + (c1 / rho) x log x, the
/// bound obtained at r = x^(1/rho).
inline TwoPointReport two_point_estimate_check(const TwoPointInputs& in) {
  if (!in.B || !in.A || !in.b || !in.rho || !in.c1 || !in.c2)
    fail(ErrorKind::IncompleteHypotheses, "need B, A, b, rho, c1 and c2");
  if (!(*in.rho > 0)) fail(ErrorKind::InvalidArgument, "rho must be positive");
  if (!(in.x > 0)) fail(ErrorKind::InvalidArgument, "x must be positive");
  TwoPointReport rep;
  const double x = in.x, lx = std::log(x), rho = *in.rho;
  rep.r = std::pow(x, 1 / rho);
  rep.lhs = in.log_f_p2;
  rep.rhs = *in.B - *in.A * x / rho * lx + *in.c2 * x + *in.c1 / rho * x * lx;
  rep.margin = rep.rhs - rep.lhs;
  if (in.measured_order) rep.hypothesis_met = *in.measured_order >= *in.A * x - *in.b;
  rep.asymptotic = x >= in.x_threshold;
  rep.text = "margin " + std::to_string(rep.margin) + " at r = " + std::to_string(rep.r);
  if (!rep.hypothesis_met) rep.text += "; order hypothesis not met";
  if (!rep.asymptotic) rep.text += "; x >> 0 required (x below threshold " + std::to_string(in.x_threshold) + ")";
  return rep;
}

/// Fills B, the measured order at p1 and log|F(p2)| for a constructed
/// section, F being its pairing with `germs` (expanded at p1, long enough to
/// converge at p2).
inline TwoPointInputs measure_two_point(const ConstructedSection& sec, const SeriesVector& germs, const Rational& p2,
                                        std::size_t x) {
  auto f = pair(sec.section, germs);
  TwoPointInputs in;
  in.x = static_cast<double>(x);
  in.B = sec.height.value;
  in.measured_order = static_cast<double>(vanishing_order(f).value);
  in.log_f_p2 = log_abs_partial_sum(f, p2 - f.base_point());
  return in;
}

}  // namespace horolab
