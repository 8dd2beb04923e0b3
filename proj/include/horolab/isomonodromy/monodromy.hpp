#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <Eigen/Dense>

#include "horolab/connection/system.hpp"
#include "horolab/isomonodromy/symbolic.hpp"

namespace horolab {

using HpReal = boost::multiprecision::cpp_bin_float_50;
using HpComplex = boost::multiprecision::cpp_complex_50;

/// Small dense complex matrix at 50-digit working precision.
class HpMatrix {
 public:
  HpMatrix() = default;
  explicit HpMatrix(std::size_t n) : n_(n), a_(n * n, HpComplex(0)) {}
  static HpMatrix identity(std::size_t n) {
    HpMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = HpComplex(1);
    return m;
  }
  std::size_t size() const { return n_; }
  HpComplex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const HpComplex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  friend HpMatrix operator*(const HpMatrix& a, const HpMatrix& b) {
    HpMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k)
        for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
  }
  friend HpMatrix operator+(HpMatrix a, const HpMatrix& b) {
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
    return a;
  }
  friend HpMatrix operator-(HpMatrix a, const HpMatrix& b) {
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
    return a;
  }
  friend HpMatrix operator*(const HpComplex& s, HpMatrix a) {
    for (auto& v : a.a_) v *= s;
    return a;
  }
  HpReal max_abs() const {
    HpReal m = 0;
    for (const auto& v : a_) m = std::max(m, HpReal(abs(v)));
    return m;
  }
  HpComplex trace() const {
    HpComplex t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }
  HpComplex determinant() const {
    HpMatrix m = *this;
    HpComplex d = 1;
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < n_; ++r)
        if (abs(m(r, c)) > abs(m(p, c))) p = r;
      if (abs(m(p, c)) == 0) return HpComplex(0);
      if (p != c) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(m(p, j), m(c, j));
        d = -d;
      }
      d *= m(c, c);
      for (std::size_t r = c + 1; r < n_; ++r) {
        HpComplex f = m(r, c) / m(c, c);
        for (std::size_t j = c; j < n_; ++j) m(r, j) -= f * m(c, j);
      }
    }
    return d;
  }
  Eigen::MatrixXcd to_eigen() const {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::complex<double>(static_cast<double>(a_[i * n_ + j].real()), static_cast<double>(a_[i * n_ + j].imag()));
    return e;
  }

 private:
  std::size_t n_ = 0;
  std::vector<HpComplex> a_;
};

/// z -> A(z) together with the finite singular points to keep away from.
struct ComplexSystem {
  std::size_t n = 0;
  std::function<HpMatrix(const HpComplex&)> coefficients;
  std::vector<std::complex<double>> singular_points;
};

inline HpComplex to_hp(const Rational& q) { return HpComplex(HpReal(q.num().get_str()) / HpReal(q.den().get_str())); }

namespace detail {

// sum_m c_m z^m / (z^i (z-1)^j) with rational c_m
struct CompiledEntry {
  std::vector<std::pair<int, HpComplex>> terms;
  int dz = 0, dz1 = 0;

  HpComplex operator()(const HpComplex& z) const {
    HpComplex acc = 0, zp = 1;
    int e = 0;
    for (const auto& [pw, c] : terms) {
      while (e < pw) {
        zp *= z;
        ++e;
      }
      acc += c * zp;
    }
    for (int t = 0; t < dz; ++t) acc /= z;
    for (int t = 0; t < dz1; ++t) acc /= (z - HpComplex(1));
    return acc;
  }
};

inline CompiledEntry compile(const SymExpr& e) {
  CompiledEntry c;
  if (e.x_order() != 0) fail(ErrorKind::DataError, "coefficient still depends on x: " + e.str());
  std::map<int, Rational> by_power;
  for (const auto& [m, coef] : e.numerator()) {
    int pw = 0;
    for (const auto& [v, k] : m) {
      if (v != "z") fail(ErrorKind::DataError, "unsubstituted symbol " + v + " in " + e.str());
      pw = k;
    }
    by_power[pw] = by_power[pw] + coef;
  }
  for (const auto& [pw, coef] : by_power) c.terms.emplace_back(pw, to_hp(coef));
  c.dz = e.z_order();
  c.dz1 = e.z1_order();
  return c;
}

}  // namespace detail

/// Complex evaluation of a matrix of SymExpr depending on z only.
inline ComplexSystem complex_system(const SymMatrix& a) {
  if (a.rows() != a.cols()) fail(ErrorKind::DataError, "coefficient matrix must be square");
  std::vector<detail::CompiledEntry> entries;
  bool at0 = false, at1 = false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      entries.push_back(detail::compile(a(i, j)));
      at0 |= entries.back().dz > 0;
      at1 |= entries.back().dz1 > 0;
    }
  ComplexSystem s;
  s.n = a.rows();
  if (at0) s.singular_points.emplace_back(0, 0);
  if (at1) s.singular_points.emplace_back(1, 0);
  const std::size_t n = s.n;
  s.coefficients = [entries, n](const HpComplex& z) {
    HpMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = entries[i * n + j](z);
    return m;
  };
  return s;
}

/// Complex evaluation of a connection-engine system.
inline ComplexSystem complex_system(const DifferentialSystem& sys) {
  ComplexSystem s;
  s.n = sys.rank();
  for (const auto& [pt, mult] : sys.pole_divisor().finite) s.singular_points.emplace_back(pt.to_double(), 0);
  if (sys.pole_divisor().irrational_part.degree() > 0)
    fail(ErrorKind::DataError, "poles at irrational points are not supported for numerical monodromy");
  const std::size_t n = s.n;
  s.coefficients = [sys, n](const HpComplex& z) {
    HpMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = sys(i, j).evaluate(z, [](const Rational& q) { return to_hp(q); });
    return m;
  };
  return s;
}

struct Loop {
  std::complex<double> center;
  double radius = 0.5;
  int orientation = 1;       // +1 counter-clockwise
  double start_turn = 0;     // base point = center + radius e^{2 pi i start_turn}

  std::complex<double> base_point() const { return center + std::polar(radius, 2 * M_PI * start_turn); }
};

struct MonodromyMatrix {
  Loop loop;
  HpMatrix matrix;
  double digits = 0;          // agreement between the last two refinements
  std::size_t macro_steps = 0;
  double liouville_error = 0; // |det M - exp(integral of tr A)| / |det M|
};

namespace detail {

class BulirschStoer {
 public:
  BulirschStoer(const ComplexSystem& sys, const Loop& loop, HpReal tol) : sys_(sys), loop_(loop), tol_(tol) {}

  HpMatrix rhs(const HpReal& t, const HpMatrix& y) const {
    const HpReal ang = 2 * boost::math::constants::pi<HpReal>() * HpReal(loop_.start_turn) + t * loop_.orientation;
    const HpComplex e(boost::multiprecision::cos(ang), boost::multiprecision::sin(ang));
    const HpComplex z = HpComplex(loop_.center.real(), loop_.center.imag()) + HpReal(loop_.radius) * e;
    const HpComplex dz = HpComplex(0, loop_.orientation) * HpReal(loop_.radius) * e;
    return dz * (sys_.coefficients(z) * y);
  }

  // modified midpoint over [t, t + h] with n substeps
  HpMatrix midpoint(const HpReal& t, const HpMatrix& y, const HpReal& h, int n) const {
    const HpReal s = h / n;
    HpMatrix z0 = y, z1 = y + HpComplex(s) * rhs(t, y);
    for (int k = 1; k < n; ++k) {
      HpMatrix z2 = z0 + HpComplex(2 * s) * rhs(t + s * k, z1);
      z0 = std::move(z1);
      z1 = std::move(z2);
    }
    return HpComplex(HpReal(0.5)) * (z0 + z1 + HpComplex(s) * rhs(t + h, z1));
  }

  // one extrapolated step; nullopt if the table does not settle
  std::optional<HpMatrix> step(const HpReal& t, const HpMatrix& y, const HpReal& h) const {
    constexpr int levels = 14;
    std::vector<std::vector<HpMatrix>> tab;
    std::vector<int> ns;
    for (int k = 0; k < levels; ++k) {
      const int n = 2 * (k + 1);
      ns.push_back(n);
      std::vector<HpMatrix> row{midpoint(t, y, h, n)};
      for (int j = 1; j <= k; ++j) {
        const HpReal ratio = HpReal(ns[static_cast<std::size_t>(k)]) / ns[static_cast<std::size_t>(k - j)];
        const HpReal f = 1 / (ratio * ratio - 1);
        row.push_back(row[static_cast<std::size_t>(j - 1)] +
                      HpComplex(f) * (row[static_cast<std::size_t>(j - 1)] - tab[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)]));
      }
      if (k >= 2) {
        const HpReal err = (row[static_cast<std::size_t>(k)] - tab[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(k - 1)]).max_abs();
        if (err <= tol_ * std::max(HpReal(1), row[static_cast<std::size_t>(k)].max_abs())) return row.back();
      }
      tab.push_back(std::move(row));
    }
    return std::nullopt;
  }

  // integrates the full loop with `macro` equal steps, halving failed steps
  HpMatrix run(std::size_t macro, std::size_t& evaluations) const {
    const HpReal two_pi = 2 * boost::math::constants::pi<HpReal>();
    HpMatrix y = HpMatrix::identity(sys_.n);
    const HpReal h = two_pi / macro;
    for (std::size_t k = 0; k < macro; ++k) y = advance(h * k, y, h, 0, evaluations);
    return y;
  }

 private:
  HpMatrix advance(const HpReal& t, const HpMatrix& y, const HpReal& h, int depth, std::size_t& evaluations) const {
    ++evaluations;
    if (auto r = step(t, y, h)) return *r;
    if (depth > 12) fail(ErrorKind::StiffnessError, "extrapolation did not settle after 12 step halvings");
    HpMatrix mid = advance(t, y, h / 2, depth + 1, evaluations);
    return advance(t + h / 2, mid, h / 2, depth + 1, evaluations);
  }

  const ComplexSystem& sys_;
  Loop loop_;
  HpReal tol_;
};

}  // namespace detail

/// exp of the integral of tr A(z) dz over the loop (trapezoid on the circle).
inline HpComplex liouville_determinant(const ComplexSystem& sys, const Loop& loop, std::size_t points = 512) {
  const HpReal two_pi = 2 * boost::math::constants::pi<HpReal>();
  HpComplex acc = 0;
  for (std::size_t k = 0; k < points; ++k) {
    const HpReal ang = two_pi * (HpReal(loop.start_turn) + HpReal(k) / points * loop.orientation);
    const HpComplex e(boost::multiprecision::cos(ang), boost::multiprecision::sin(ang));
    const HpComplex z = HpComplex(loop.center.real(), loop.center.imag()) + HpReal(loop.radius) * e;
    const HpComplex dz = HpComplex(0, loop.orientation) * HpReal(loop.radius) * e;
    acc += sys.coefficients(z).trace() * dz;
  }
  return exp(acc * (two_pi / points));
}

/// Monodromy of Y' = A(z) Y along a circular loop: Y(end) Y(start)^{-1}
/// with Y(start) = I. The number of macro steps doubles until two runs agree
/// to `digits` significant digits.
inline MonodromyMatrix numerical_monodromy(const ComplexSystem& sys, const Loop& loop, unsigned digits = 30) {
  if (digits < 5 || digits > 45) fail(ErrorKind::InvalidArgument, "precision must lie in 5..45 digits");
  if (!(loop.radius > 0)) fail(ErrorKind::PathError, "loop radius must be positive");
  for (const auto& s : sys.singular_points)
    if (std::fabs(std::abs(s - loop.center) - loop.radius) < 0.1)
      fail(ErrorKind::PathError, "loop passes within 0.1 of the singular point (" + std::to_string(s.real()) + ", " +
                                     std::to_string(s.imag()) + ")");
  const HpReal tol = boost::multiprecision::pow(HpReal(10), -static_cast<int>(digits) - 3);
  detail::BulirschStoer bs(sys, loop, tol);
  MonodromyMatrix out;
  out.loop = loop;
  std::size_t evals = 0, macro = 8;
  HpMatrix prev = bs.run(macro, evals);
  double agreement = 0;
  for (int round = 0; round < 6; ++round) {
    macro *= 2;
    HpMatrix next = bs.run(macro, evals);
    const HpReal diff = (next - prev).max_abs() / std::max(HpReal(1), next.max_abs());
    agreement = diff == 0 ? 50.0 : -static_cast<double>(log10(diff));
    prev = std::move(next);
    if (agreement >= digits) {
      out.matrix = prev;
      out.digits = agreement;
      out.macro_steps = macro;
      const HpComplex det = out.matrix.determinant();
      out.liouville_error = static_cast<double>(abs(det - liouville_determinant(sys, loop)) / abs(det));
      return out;
    }
  }
  fail(ErrorKind::StiffnessError, "monodromy did not converge: " + std::to_string(agreement) + " of " +
                                      std::to_string(digits) + " digits after " + std::to_string(macro) +
                                      " macro steps");
}

struct ConjugacyReport {
  Eigen::MatrixXcd transform;           // T with T M1_i = M2_i T, Frobenius norm 1
  double residual = 0;                  // max_i |T M1_i - M2_i T| / (|M1_i| + |M2_i|)
  double smallest_singular = 0;         // of the stacked constraint map, relative to the largest
  double threshold = 0;
  std::size_t null_dimension = 0;
  double transform_condition = 0;
  bool conjugate = false;
  bool unique = false;
  std::string verdict;
};

/// Seeks one invertible T with T M1_i = M2_i T for all i from the null space
/// of the stacked map vec(T) -> vec(T M1_i - M2_i T).
inline ConjugacyReport conjugacy_check(const std::vector<Eigen::MatrixXcd>& m1, const std::vector<Eigen::MatrixXcd>& m2,
                                       double tolerance = 1e-6) {
  if (m1.empty() || m1.size() != m2.size()) fail(ErrorKind::DataError, "need matched non-empty lists");
  const Eigen::Index n = m1[0].rows();
  for (std::size_t i = 0; i < m1.size(); ++i)
    if (m1[i].rows() != n || m1[i].cols() != n || m2[i].rows() != n || m2[i].cols() != n)
      fail(ErrorKind::DataError, "all matrices must be square of one size");
  const Eigen::Index k = static_cast<Eigen::Index>(m1.size());
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(k * n * n, n * n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& a = m1[static_cast<std::size_t>(i)];
    const auto& b = m2[static_cast<std::size_t>(i)];
    // vec(T A) = (A^T kron I) vec T, vec(B T) = (I kron B) vec T
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        big.block(i * n * n + c * n, r * n, n, n) += a(r, c) * id;
        if (r == c) big.block(i * n * n + c * n, r * n, n, n) -= b;
      }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(big, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0) > 0 ? sv(0) : 1;
  ConjugacyReport rep;
  rep.threshold = tolerance;
  rep.smallest_singular = sv(sv.size() - 1) / smax;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) / smax <= tolerance) ++rep.null_dimension;
  // generic combination of the (near) null vectors, fixed coefficients for determinism
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n * n);
  const Eigen::Index nd = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(rep.null_dimension));
  for (Eigen::Index j = 0; j < nd; ++j)
    v += std::complex<double>(1.0 / (j + 1), 0.5 / (j + 2)) * svd.matrixV().col(n * n - 1 - j);
  v.normalize();
  rep.transform = Eigen::Map<Eigen::MatrixXcd>(v.data(), n, n);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& a = m1[static_cast<std::size_t>(i)];
    const auto& b = m2[static_cast<std::size_t>(i)];
    rep.residual = std::max(rep.residual, (rep.transform * a - b * rep.transform).norm() / (a.norm() + b.norm()));
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> ts(rep.transform);
  const auto& tv = ts.singularValues();
  rep.transform_condition = tv(tv.size() - 1) > 0 ? tv(0) / tv(tv.size() - 1) : HUGE_VAL;
  rep.unique = rep.null_dimension == 1;
  rep.conjugate = rep.null_dimension >= 1 && rep.residual <= tolerance && rep.transform_condition < 1e10;
  if (rep.conjugate)
    rep.verdict = rep.unique ? "conjugate" : "conjugate (T not unique: null space of dimension " +
                                                 std::to_string(rep.null_dimension) + ")";
  else if (rep.null_dimension == 0)
    rep.verdict = "not conjugate: no intertwiner within tolerance";
  else
    rep.verdict = "not conjugate: intertwiners found are singular";
  return rep;
}

}  // namespace horolab
