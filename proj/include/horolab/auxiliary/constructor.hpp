#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "horolab/connection/operations.hpp"

namespace horolab {

/// Vanishing-order target per point when none is given explicitly.
enum class OrderPolicy {
  Maximal,  // nu = floor((m(x+1) - 1) / s): one free kernel dimension in the generic case
  Slack,    // nu = floor((m(x+1) - 1) / s) - 1: at least one more spare dimension
};

inline std::size_t default_order(std::size_t m, std::size_t x, std::size_t s, OrderPolicy policy) {
  if (s == 0) fail(ErrorKind::InvalidArgument, "vanishing problem needs at least one point");
  std::size_t nu = (m * (x + 1) - 1) / s;
  if (policy == OrderPolicy::Slack) nu = nu > 0 ? nu - 1 : 0;
  return nu;
}

/// Find P = (P_1..P_m), deg P_k <= x, with <P, f_j> vanishing to order nu at
/// each point p_j; germs[j] is the vector f at p_j.
struct VanishingProblem {
  std::vector<Rational> points;
  std::vector<SeriesVector> germs;
  std::size_t degree = 0;
  std::size_t target_order = 0;

  std::size_t rank() const { return germs.empty() ? 0 : germs[0].size(); }
  std::size_t unknowns() const { return rank() * (degree + 1); }
};

struct ConstructedSection {
  PolySection section;                 // integer coefficients, primitive
  std::vector<Integer> coefficients;   // same data, flat: component-major, degree-minor
  std::vector<std::size_t> achieved_orders;
  std::vector<bool> saturated;         // pairing vanished through the whole truncation
  Height height;
  std::size_t kernel_dimension = 0;
  std::size_t constraint_rank = 0;
};

namespace detail {

inline void validate(const VanishingProblem& prob) {
  const std::size_t s = prob.points.size();
  if (s == 0 || prob.germs.size() != s) fail(ErrorKind::DataError, "one germ vector per point is required");
  const std::size_t m = prob.rank();
  if (m == 0) fail(ErrorKind::DataError, "empty germ vector");
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a + 1; b < s; ++b)
      if (prob.points[a] == prob.points[b]) fail(ErrorKind::DataError, "points must be distinct");
  for (std::size_t j = 0; j < s; ++j) {
    if (prob.germs[j].size() != m) fail(ErrorKind::DataError, "germ vectors differ in length");
    for (const auto& g : prob.germs[j]) {
      if (g.base_point() != prob.points[j]) fail(ErrorKind::DataError, "germ expanded at the wrong point");
      if (g.order() != prob.germs[j][0].order()) fail(ErrorKind::DataError, "inconsistent germ truncation");
      if (g.order() + 1 < prob.target_order)
        fail(ErrorKind::DataError, "germ truncation " + std::to_string(g.order()) + " too short for order " +
                                       std::to_string(prob.target_order));
    }
  }
  if (s * prob.target_order + 1 > prob.unknowns())
    fail(ErrorKind::OverConstrained, std::to_string(s * prob.target_order) + " conditions for " +
                                         std::to_string(prob.unknowns()) + " unknowns");
}

inline bool lex_less(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline Integer max_abs(const std::vector<Integer>& v) {
  Integer h = 0;
  for (const auto& c : v)
    if (abs(c) > h) h = abs(c);
  return h;
}

}  // namespace detail

/// Rows: Taylor coefficients 0..nu-1 of <P, f_j> at p_j; columns: the
/// coefficient of z^d in P_k at index k(x+1) + d.
inline DenseMatrix<Rational> constraint_matrix(const VanishingProblem& prob) {
  detail::validate(prob);
  const std::size_t m = prob.rank(), x = prob.degree, nu = prob.target_order, s = prob.points.size();
  DenseMatrix<Rational> c(s * nu, m * (x + 1));
  for (std::size_t j = 0; j < s; ++j) {
    const Rational& p = prob.points[j];
    // binom(d, e) p^(d-e): coefficient of w^e in (p + w)^d
    std::vector<std::vector<Rational>> shift(x + 1);
    for (std::size_t d = 0; d <= x; ++d) {
      QPoly zd = QPoly::monomial(Rational(1), d).shifted(p);
      for (std::size_t e = 0; e <= d; ++e) shift[d].push_back(zd[e]);
    }
    for (std::size_t t = 0; t < nu; ++t)
      for (std::size_t k = 0; k < m; ++k) {
        const auto& f = prob.germs[j][k];
        for (std::size_t d = 0; d <= x; ++d) {
          Rational acc(0);
          for (std::size_t e = 0; e <= std::min(d, t); ++e)
            if (!shift[d][e].is_zero() && !f[t - e].is_zero()) acc += shift[d][e] * f[t - e];
          c(j * nu + t, k * (x + 1) + d) = acc;
        }
      }
  }
  return c;
}

inline PolySection section_from_flat(const std::vector<Integer>& v, std::size_t m, std::size_t x) {
  std::vector<QPoly> comps;
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<Rational> c;
    for (std::size_t d = 0; d <= x; ++d) c.emplace_back(v[k * (x + 1) + d]);
    comps.emplace_back(c);
  }
  return PolySection(std::move(comps), static_cast<int>(x));
}

/// Sign convention: the lowest-degree non-zero coefficient of the last
/// non-zero component is positive.
inline void normalize_sign(std::vector<Integer>& v, std::size_t m, std::size_t x) {
  for (std::size_t k = m; k-- > 0;)
    for (std::size_t d = 0; d <= x; ++d) {
      const Integer& c = v[k * (x + 1) + d];
      if (c == 0) continue;
      if (c < 0)
        for (auto& e : v) e = -e;
      return;
    }
}

/// Non-zero integer section of small height meeting the vanishing targets.
inline ConstructedSection construct_small_section(const VanishingProblem& prob, bool lattice_reduce = true) {
  auto c = constraint_matrix(prob);
  const std::size_t m = prob.rank(), x = prob.degree;
  auto basis = integer_kernel(c);
  if (basis.empty()) fail(ErrorKind::OverConstrained, "constraint matrix has a trivial kernel");
  if (lattice_reduce && basis.size() > 1) basis = lll_reduce(basis);

  ConstructedSection out;
  out.kernel_dimension = basis.size();
  out.constraint_rank = prob.unknowns() - basis.size();
  std::optional<std::vector<Integer>> best;
  Integer best_h;
  for (auto v : basis) {
    Integer g = 0;
    for (const auto& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
    for (auto& e : v) e /= g;
    normalize_sign(v, m, x);
    Integer h = detail::max_abs(v);
    if (!best || h < best_h || (h == best_h && detail::lex_less(v, *best))) {
      best = v;
      best_h = h;
    }
  }
  out.coefficients = *best;
  out.section = section_from_flat(out.coefficients, m, x);
  out.height = Height{log_abs(best_h)};

  for (std::size_t j = 0; j < prob.points.size(); ++j) {
    auto f = pair(out.section, prob.germs[j]);
    auto ord = f.vanishing_order();
    out.saturated.push_back(!ord);
    out.achieved_orders.push_back(ord ? *ord : f.order() + 1);
    if (out.achieved_orders.back() < prob.target_order)
      fail(ErrorKind::DataError, "post-hoc check failed: section does not reach the target order");
  }
  return out;
}

/// Germ supplier: for a truncation order T, the germ vectors at each point.
using GermSource = std::function<std::vector<SeriesVector>(std::size_t)>;

/// Germs of the solution of sys with the given initial vector at each point.
inline GermSource solution_germs(const DifferentialSystem& sys, std::vector<Rational> points,
                                 std::vector<std::vector<Rational>> initial) {
  if (points.size() != initial.size()) fail(ErrorKind::DataError, "one initial vector per point is required");
  return [sys, points, initial](std::size_t t) {
    std::vector<SeriesVector> g;
    for (std::size_t j = 0; j < points.size(); ++j) g.push_back(solve_series(sys, points[j], t, initial[j]));
    return g;
  };
}

struct ProblemTemplate {
  std::vector<Rational> points;
  GermSource germs;
  OrderPolicy policy = OrderPolicy::Maximal;

  VanishingProblem at(std::size_t x, std::size_t m) const {
    VanishingProblem p;
    p.points = points;
    p.degree = x;
    p.target_order = default_order(m, x, points.size(), policy);
    p.germs = germs(p.target_order + x + 2);
    return p;
  }
};

struct ProfileRow {
  std::size_t x = 0;
  std::size_t target_order = 0;
  double log_height = 0;
  std::size_t achieved_order = 0;  // minimum over the points
  std::size_t kernel_dimension = 0;
};

struct HeightProfile {
  std::vector<ProfileRow> rows;
  // log_height / (x log x) ~ ratio_intercept + ratio_slope * x   (rows with x >= 2)
  double ratio_intercept = 0, ratio_slope = 0, max_ratio = 0;
  // log_height ~ a x log x + b x
  double a = 0, b = 0;
};

inline HeightProfile height_profile(const ProblemTemplate& tmpl, std::size_t m, const std::vector<std::size_t>& xs) {
  HeightProfile prof;
  for (std::size_t x : xs) {
    auto prob = tmpl.at(x, m);
    auto sec = construct_small_section(prob);
    ProfileRow r;
    r.x = x;
    r.target_order = prob.target_order;
    r.log_height = sec.height.value;
    r.achieved_order = *std::min_element(sec.achieved_orders.begin(), sec.achieved_orders.end());
    r.kernel_dimension = sec.kernel_dimension;
    prof.rows.push_back(r);
  }
  std::vector<const ProfileRow*> fit;
  for (const auto& r : prof.rows)
    if (r.x >= 2) fit.push_back(&r);
  if (fit.size() >= 2) {
    const auto n = static_cast<Eigen::Index>(fit.size());
    Eigen::MatrixXd a1(n, 2), a2(n, 2);
    Eigen::VectorXd y1(n), y2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double x = static_cast<double>(fit[static_cast<std::size_t>(i)]->x);
      double h = fit[static_cast<std::size_t>(i)]->log_height;
      double ratio = h / (x * std::log(x));
      prof.max_ratio = std::max(prof.max_ratio, ratio);
      a1(i, 0) = 1;
      a1(i, 1) = x;
      y1(i) = ratio;
      a2(i, 0) = x * std::log(x);
      a2(i, 1) = x;
      y2(i) = h;
    }
    Eigen::Vector2d s1 = a1.colPivHouseholderQr().solve(y1), s2 = a2.colPivHouseholderQr().solve(y2);
    prof.ratio_intercept = s1(0);
    prof.ratio_slope = s1(1);
    prof.a = s2(0);
    prof.b = s2(1);
  }
  return prof;
}

/// Effect of one dual derivative on a constructed section: per-point order
/// drop and the height increment after clearing denominators.
struct DerivativeCompatibility {
  std::vector<long> order_drops;
  double height_increment = 0;
  Integer denominator = 1;  // integer cleared from nabla(P)
  bool integral = true;
};

inline DerivativeCompatibility derivative_compatibility(const ConstructedSection& sec, const VanishingProblem& prob,
                                                        const DifferentialSystem& sys, const DerivationField& der) {
  DerivativeCompatibility out;
  auto d = dual_derivative(sec.section, sys, der);
  Integer l = 1, h = 0;
  for (const auto& comp : d.components)
    for (const auto& c : comp.coefficients()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
  for (const auto& comp : d.components)
    for (const auto& c : comp.coefficients()) {
      Integer v = abs(c.num() * (l / c.den()));
      if (v > h) h = v;
    }
  out.denominator = l;
  out.integral = l == 1;
  out.height_increment = (h == 0 ? 0.0 : log_abs(h)) - sec.height.value;
  for (std::size_t j = 0; j < prob.points.size(); ++j) {
    auto g = pair(d, prob.germs[j]);
    auto ord = g.vanishing_order();
    long after = ord ? static_cast<long>(*ord) : static_cast<long>(g.order() + 1);
    out.order_drops.push_back(static_cast<long>(sec.achieved_orders[j]) - after);
  }
  return out;
}

}  // namespace horolab
