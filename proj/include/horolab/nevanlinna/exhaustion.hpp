#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "horolab/error.hpp"

namespace horolab {

using Complex = std::complex<double>;

/// B(r) = {g <= 2 log r} (calibrated, model disks of radius r) or
/// {g <= log r} (raw, model disks of radius sqrt r).
enum class LevelConvention { Calibrated, Raw };

inline double level_of(double r, LevelConvention c) {
  if (!(r > 0)) fail(ErrorKind::InvalidArgument, "r must be positive");
  return c == LevelConvention::Calibrated ? 2 * std::log(r) : std::log(r);
}

struct DivisorPoint {
  std::optional<Complex> point;  // nullopt is the point at infinity
  int multiplicity = 1;
};

/// Genus-0 exhaustion function
///   g(z) = log|z - p|^2 - (1/d) sum_i n_i log|z - q_i|^2
/// over the finite points of D; infinity carries no term.
class ExhaustionFunction {
 public:
  ExhaustionFunction(Complex center, std::vector<DivisorPoint> divisor) : p_(center), divisor_(std::move(divisor)) {
    for (const auto& q : divisor_) {
      if (q.multiplicity <= 0) fail(ErrorKind::InvalidArgument, "divisor multiplicities must be positive");
      if (q.point && *q.point == p_) fail(ErrorKind::InvalidArgument, "the center may not lie on the divisor");
      d_ += q.multiplicity;
    }
    if (d_ == 0) fail(ErrorKind::InvalidArgument, "empty divisor");
  }

  /// D = {infinity}: g = log|z - p|^2.
  static ExhaustionFunction plane(Complex center = 0) { return {center, {DivisorPoint{std::nullopt, 1}}}; }

  const Complex& center() const { return p_; }
  const std::vector<DivisorPoint>& divisor() const { return divisor_; }
  int degree() const { return d_; }

  bool is_singular(Complex z) const {
    if (z == p_) return true;
    for (const auto& q : divisor_)
      if (q.point && *q.point == z) return true;
    return false;
  }

  double operator()(Complex z) const {
    if (is_singular(z)) fail(ErrorKind::Singularity, "exhaustion function evaluated at the center or on the divisor");
    return raw(z);
  }

  /// 2 dg/dz; the gradient is its conjugate and |grad g| its modulus.
  Complex dz2(Complex z) const {
    Complex s = 2.0 / (z - p_);
    for (const auto& q : divisor_)
      if (q.point) s -= 2.0 * static_cast<double>(q.multiplicity) / static_cast<double>(d_) / (z - *q.point);
    return s;
  }

  double raw(Complex z) const {
    double v = std::log(std::norm(z - p_));
    for (const auto& q : divisor_)
      if (q.point)
        v -= static_cast<double>(q.multiplicity) / static_cast<double>(d_) * std::log(std::norm(z - *q.point));
    return v;
  }

  /// Largest distance from the center to a finite divisor point, at least 1.
  double scale() const {
    double s = 1;
    for (const auto& q : divisor_)
      if (q.point) s = std::max(s, std::abs(*q.point - p_));
    return s;
  }

 private:
  Complex p_;
  std::vector<DivisorPoint> divisor_;
  int d_ = 0;
};

struct LevelSample {
  Complex z;
  double weight = 0;
};

struct LevelCurve {
  double r = 0;
  double level = 0;
  std::vector<LevelSample> samples;
  double mass = 0;
  double max_level_error = 0;
  std::string method;  // "center", "divisor" or "grid"
};

namespace detail {

/// Radial sampling of one closed component z = c + rho(theta) e^{i theta}.
/// `inward` marches from large to small radii. Returns nullopt when some
/// ray has no crossing or the radius jumps between neighbouring rays.
class RadialShooter {
 public:
  RadialShooter(const ExhaustionFunction& g, double level) : g_(g), level_(level) {}

  std::optional<std::vector<LevelSample>> component(Complex c, bool inward, bool inside_positive, std::size_t n) const {
    std::vector<LevelSample> out;
    out.reserve(n);
    const double dtheta = 2 * M_PI / static_cast<double>(n);
    std::optional<double> hint;
    double prev_t = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = dtheta * static_cast<double>(k);
      const Complex dir = std::polar(1.0, theta);
      auto t = hint ? near(c, dir, *hint, inward) : std::nullopt;
      if (!t) t = march(c, dir, inward, inside_positive);
      if (!t) return std::nullopt;
      if (k > 0 && std::fabs(*t - prev_t) > 0.5) return std::nullopt;
      prev_t = *t;
      hint = t;
      const double rho = std::exp(*t);
      const Complex z = c + rho * dir;
      const Complex grad = g_.dz2(z);
      const double g_theta = std::real(grad * Complex(0, rho) * dir);
      const double g_rho = std::real(grad * dir);
      if (g_rho == 0) return std::nullopt;
      const Complex zprime = Complex(-g_theta / g_rho, rho) * dir;
      out.push_back({z, std::abs(grad) * std::abs(zprime) * dtheta / (4 * M_PI)});
    }
    return out;
  }

 private:
  double h(Complex c, Complex dir, double t) const {
    const Complex z = c + std::exp(t) * dir;
    if (g_.is_singular(z)) return std::numeric_limits<double>::quiet_NaN();
    return g_.raw(z) - level_;
  }

  double refine(Complex c, Complex dir, double a, double b) const {
    auto f = [&](double t) { return h(c, dir, t); };
    boost::uintmax_t iters = 200;
    auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, f(a), f(b), boost::math::tools::eps_tolerance<double>(52),
                                                      iters);
    return 0.5 * (lo + hi);
  }

  // Start where the sign is that of the inside of the component, march until it flips.
  std::optional<double> march(Complex c, Complex dir, bool inward, bool inside_positive) const {
    const double ls = std::log(g_.scale());
    const double step = 0.25;
    auto inside = [&](double v) { return inside_positive ? v > 0 : v < 0; };
    double t = inward ? ls + 1 : ls - 1;
    double v = h(c, dir, t);
    for (int i = 0; !(inside(v)) && i < 3000; ++i) {
      t += inward ? step : -step;
      if (t > 700 || t < -700) return std::nullopt;
      v = h(c, dir, t);
    }
    if (!inside(v)) return std::nullopt;
    for (int i = 0; i < 6000; ++i) {
      double t2 = t + (inward ? -step : step);
      if (t2 > 700 || t2 < -700) return std::nullopt;
      double v2 = h(c, dir, t2);
      if (std::isnan(v2)) return std::nullopt;
      if (!inside(v2)) {
        if (v2 == 0) return t2;
        return refine(c, dir, std::min(t, t2), std::max(t, t2));
      }
      t = t2;
      v = v2;
    }
    return std::nullopt;
  }

  // Bracket around the previous ray's crossing.
  std::optional<double> near(Complex c, Complex dir, double t0, bool inward) const {
    for (double d = 1e-3; d < 0.5; d *= 4) {
      double a = t0 - d, b = t0 + d;
      double va = h(c, dir, a), vb = h(c, dir, b);
      if (std::isnan(va) || std::isnan(vb)) return std::nullopt;
      if (va == 0) return a;
      if (vb == 0) return b;
      if ((va < 0) != (vb < 0)) {
        (void)inward;
        return refine(c, dir, a, b);
      }
    }
    return std::nullopt;
  }

  const ExhaustionFunction& g_;
  double level_;
};

inline void finish(LevelCurve& curve, const ExhaustionFunction& g) {
  curve.mass = 0;
  curve.max_level_error = 0;
  for (const auto& s : curve.samples) {
    curve.mass += s.weight;
    curve.max_level_error = std::max(curve.max_level_error, std::fabs(g.raw(s.z) - curve.level));
  }
}

/// Marching squares on a square grid around the center; samples are the
/// edge crossings, each weighted by half of its adjacent segment flux.
inline std::vector<LevelSample> grid_contour(const ExhaustionFunction& g, double level, double half_width,
                                             std::size_t cells) {
  const double hstep = 2 * half_width / static_cast<double>(cells);
  const Complex origin = g.center() - Complex(half_width, half_width);
  auto at = [&](std::size_t i, std::size_t j) {
    return origin + Complex(hstep * static_cast<double>(i), hstep * static_cast<double>(j));
  };
  auto val = [&](Complex z) {
    return g.is_singular(z) ? std::numeric_limits<double>::quiet_NaN() : g.raw(z) - level;
  };
  std::vector<double> grid((cells + 1) * (cells + 1));
  for (std::size_t i = 0; i <= cells; ++i)
    for (std::size_t j = 0; j <= cells; ++j) grid[i * (cells + 1) + j] = val(at(i, j));
  auto cross = [&](Complex a, Complex b) {
    auto f = [&](double s) { return val(a + s * (b - a)); };
    boost::uintmax_t iters = 200;
    auto [lo, hi] =
        boost::math::tools::toms748_solve(f, 0.0, 1.0, f(0.0), f(1.0), boost::math::tools::eps_tolerance<double>(52), iters);
    return a + 0.5 * (lo + hi) * (b - a);
  };
  std::vector<LevelSample> out;
  for (std::size_t i = 0; i < cells; ++i)
    for (std::size_t j = 0; j < cells; ++j) {
      const Complex c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      const double v[4] = {grid[i * (cells + 1) + j], grid[(i + 1) * (cells + 1) + j],
                           grid[(i + 1) * (cells + 1) + j + 1], grid[i * (cells + 1) + j + 1]};
      bool bad = false;
      for (double x : v) bad |= std::isnan(x);
      if (bad) continue;
      std::vector<Complex> pts;
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        if ((v[e] < 0) != (v[f] < 0)) pts.push_back(cross(c[e], c[f]));
      }
      if (pts.size() == 4) {
        // saddle: pair by the sign at the cell center
        const double mid = val((c[0] + c[2]) * 0.5);
        if ((mid < 0) == (v[0] < 0)) std::swap(pts[1], pts[3]);
      }
      for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
        const double len = std::abs(pts[k + 1] - pts[k]);
        for (const Complex& z : {pts[k], pts[k + 1]})
          out.push_back({z, std::abs(g.dz2(z)) * len / (8 * M_PI)});
      }
    }
  return out;
}

}  // namespace detail

/// Samples S(r) = {g = level(r)} with weights of the measure d^c g there.
/// Tries one star-shaped curve around the center, then one component per
/// divisor point, then grid contouring; the total mass is measured, and a
/// sampling that misses 1 by more than 1e-6 is rejected.
inline LevelCurve level_curve(const ExhaustionFunction& g, double r, std::size_t n_samples,
                              LevelConvention conv = LevelConvention::Calibrated) {
  if (n_samples < 8) fail(ErrorKind::InvalidArgument, "need at least 8 samples");
  LevelCurve curve;
  curve.r = r;
  curve.level = level_of(r, conv);
  const detail::RadialShooter shoot(g, curve.level);
  auto accept = [&](LevelCurve& c) {
    detail::finish(c, g);
    return std::fabs(c.mass - 1) <= 1e-6 && c.max_level_error <= 1e-9;
  };

  if (auto s = shoot.component(g.center(), false, false, n_samples)) {
    curve.samples = std::move(*s);
    curve.method = "center";
    if (accept(curve)) return curve;
  }

  curve.samples.clear();
  bool ok = true;
  for (const auto& q : g.divisor()) {
    const std::size_t n = std::max<std::size_t>(8, n_samples * static_cast<std::size_t>(q.multiplicity) /
                                                       static_cast<std::size_t>(g.degree()));
    auto s = q.point ? shoot.component(*q.point, false, true, n) : shoot.component(g.center(), true, true, n);
    if (!s) {
      ok = false;
      break;
    }
    curve.samples.insert(curve.samples.end(), s->begin(), s->end());
  }
  curve.method = "divisor";
  if (ok && accept(curve)) return curve;

  double half = 2 * g.scale() + 1;
  bool at_infinity = false;
  for (const auto& q : g.divisor()) at_infinity |= !q.point;
  if (at_infinity) {
    auto outside = [&](double rad) {
      for (int k = 0; k < 64; ++k)
        if (g.raw(g.center() + std::polar(rad, 2 * M_PI * k / 64)) <= curve.level) return false;
      return true;
    };
    while (!outside(half) && half < 1e8) half *= 2;
  }
  curve.samples = detail::grid_contour(g, curve.level, half, 2048);
  curve.method = "grid";
  if (curve.samples.empty())
    fail(ErrorKind::RTooSmall, "empty level set at r = " + std::to_string(r));
  if (!accept(curve))
    fail(ErrorKind::RTooSmall, "level set at r = " + std::to_string(r) + " not resolved (mass " +
                                   std::to_string(curve.mass) + "); increase r");
  return curve;
}

}  // namespace horolab
