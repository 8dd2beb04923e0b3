#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "horolab/connection/operations.hpp"
#include "horolab/independence/pslq.hpp"

namespace horolab {

/// Monomials of degree <= n in m variables: graded, and within a degree in
/// the descending lexicographic order of monomial_exponents. Equivalently the
/// degree-n monomials of (1, y_1, ..., y_m), so their count is binom(m+n, n).
inline std::vector<std::vector<int>> graded_monomials(std::size_t m, int n) {
  std::vector<std::vector<int>> out;
  for (int d = 0; d <= n; ++d)
    for (auto& e : monomial_exponents(m, d)) out.push_back(std::move(e));
  return out;
}

inline std::string monomial_name(const std::vector<int>& e) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += e.size() == 1 ? "x" : "y" + std::to_string(k + 1);
    if (e[k] > 1) s += "^" + std::to_string(e[k]);
  }
  return s.empty() ? "1" : s;
}

inline std::string relation_text(const std::vector<Integer>& c, const std::vector<std::vector<int>>& mons) {
  std::string s;
  for (std::size_t i = mons.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    Integer a = abs(c[i]);
    std::string mono = monomial_name(mons[i]);
    std::string term = (a == 1 && mono != "1") ? mono : (mono == "1" ? a.get_str() : a.get_str() + "*" + mono);
    if (s.empty()) s = c[i] < 0 ? "-" + term : term;
    else s += (c[i] < 0 ? " - " : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

struct RelationQuery {
  ValueProvider values;
  int degree = 1;
  double height_bound = 100;
  unsigned precision = 100;  // decimal digits
};

struct RelationReport {
  std::optional<std::vector<Integer>> found;  // coefficients on graded_monomials
  std::string relation;                       // readable form, when found
  double residual_log10 = 0;                  // log10 |sum c * monomial| re-checked at doubled precision
  double searched_height = 0;
  double norm_lower_bound = 0;                // no relation below this Euclidean norm
  std::size_t monomial_count = 0;
  std::string verdict;
};

namespace detail {

inline std::vector<BigFloat> monomial_values(const std::vector<BigFloat>& v, const std::vector<std::vector<int>>& mons,
                                             unsigned digits) {
  PrecisionGuard guard(digits);
  std::vector<BigFloat> out;
  for (const auto& e : mons) {
    BigFloat p = 1;
    for (std::size_t k = 0; k < e.size(); ++k)
      for (int t = 0; t < e[k]; ++t) p *= BigFloat(v[k], digits);
    out.push_back(p);
  }
  return out;
}

inline double log10_abs_combination(const std::vector<Integer>& c, const std::vector<BigFloat>& vals, unsigned digits) {
  PrecisionGuard guard(digits);
  BigFloat acc = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) acc += BigFloat(c[i].get_str()) * vals[i];
  if (acc == 0) return -static_cast<double>(digits);
  return static_cast<double>(BigFloat(boost::multiprecision::log10(boost::multiprecision::abs(acc))));
}

/// Relation search on an explicit monomial list (used by the dimension estimate).
inline RelationReport search_on(const RelationQuery& query, const std::vector<std::vector<int>>& mons) {
  const std::size_t n = mons.size();
  const double need = 2.0 * std::log10(std::max(query.height_bound, 10.0)) * static_cast<double>(n);
  if (static_cast<double>(query.precision) < need)
    fail(ErrorKind::InconclusiveSearch, "precision " + std::to_string(query.precision) + " below the soundness margin " +
                                            std::to_string(static_cast<int>(std::ceil(need))) + " digits");
  RelationReport rep;
  rep.searched_height = query.height_bound;
  rep.monomial_count = n;
  auto base = query.values(query.precision);
  if (n < 2) {
    rep.verdict = "none-found: a single monomial admits no relation (inconclusive, not a proof of independence)";
    return rep;
  }
  auto vals = monomial_values(base, mons, query.precision);
  auto res = pslq(vals, query.precision, std::sqrt(static_cast<double>(n)) * query.height_bound);
  rep.norm_lower_bound = res.norm_bound;
  if (res.status == PslqResult::Status::PrecisionExhausted)
    fail(ErrorKind::InconclusiveSearch, "precision exhausted before the norm bound passed the height bound");
  if (res.status == PslqResult::Status::NoneWithinBound) {
    rep.verdict = "none-found: no relation of height <= " + std::to_string(query.height_bound) +
                  " at this precision (inconclusive, not a proof of independence)";
    return rep;
  }
  auto c = res.relation;
  for (std::size_t i = n; i-- > 0;)
    if (c[i] != 0) {
      if (c[i] < 0)
        for (auto& v : c) v = -v;
      break;
    }
  for (const auto& v : c)
    if (abs(v) > query.height_bound) {
      rep.verdict = "none-found: the only relation detected exceeds the height bound (inconclusive)";
      return rep;
    }
  const unsigned twice = 2 * query.precision;
  auto check = monomial_values(query.values(twice), mons, twice);
  rep.residual_log10 = log10_abs_combination(c, check, twice);
  if (rep.residual_log10 > -static_cast<double>(query.precision))
    fail(ErrorKind::InconclusiveSearch, "candidate relation failed re-verification at doubled precision");
  rep.found = c;
  rep.relation = relation_text(c, mons);
  rep.verdict = "relation found and re-verified at " + std::to_string(twice) + " digits";
  return rep;
}

}  // namespace detail

inline RelationReport integer_relation_search(const RelationQuery& query) {
  auto probe = query.values(16);
  return detail::search_on(query, graded_monomials(probe.size(), query.degree));
}

struct SubspaceEstimate {
  std::size_t dim_e = 0;        // binom(m + n, n)
  std::size_t estimate = 0;     // dim_e minus independent relations found
  std::vector<std::string> relations;
  std::string caveat;
};

/// Repeatedly finds a relation and drops the highest monomial it involves;
/// each relation found is independent of the earlier ones.
inline SubspaceEstimate subspace_dimension_estimate(const RelationQuery& query) {
  auto probe = query.values(16);
  auto mons = graded_monomials(probe.size(), query.degree);
  SubspaceEstimate out;
  out.dim_e = mons.size();
  while (mons.size() >= 2) {
    auto rep = detail::search_on(query, mons);
    if (!rep.found) break;
    out.relations.push_back(rep.relation);
    for (std::size_t i = mons.size(); i-- > 0;)
      if ((*rep.found)[i] != 0) {
        mons.erase(mons.begin() + static_cast<long>(i));
        break;
      }
  }
  out.estimate = out.dim_e - out.relations.size();
  out.caveat = "upper estimate from relations of height <= " + std::to_string(query.height_bound) +
               " only; not a lower bound on the true dimension";
  return out;
}

struct CramerInputs {
  std::optional<double> c1, c2, c3;
  std::size_t m = 0;
};

struct CramerBound {
  double bound = 0;  // r_1 >= bound
  bool vacuous = false;
  std::string text;
};

/// r_1 c_1 - m c_2 + c_3 >= 0 over K = Q, i.e. r_1 >= (m c_2 - c_3) / c_1.
inline CramerBound cramer_bound_report(const CramerInputs& in) {
  if (!in.c1 || !in.c2 || !in.c3 || in.m == 0)
    fail(ErrorKind::IncompleteHypotheses, "need c1, c2, c3 and the rank m");
  if (*in.c1 <= 0) fail(ErrorKind::InvalidArgument, "c1 must be positive");
  CramerBound b;
  b.bound = (static_cast<double>(in.m) * *in.c2 - *in.c3) / *in.c1;
  b.vacuous = b.bound <= 0;
  b.text = "r1 >= " + std::to_string(b.bound) + (b.vacuous ? " (vacuous)" : "");
  return b;
}

/// Constants from a measured family: log|P| ~ c1 x log x + b1 x and
/// log|F| ~ kappa x log x + b2 x, with c3 = 0 so that c2 = (c1 - kappa) / m.
inline CramerInputs cramer_constants_from_family(const std::vector<double>& xs, const std::vector<double>& log_heights,
                                                 const std::vector<double>& log_remainders, std::size_t m) {
  if (xs.size() < 3 || xs.size() != log_heights.size() || xs.size() != log_remainders.size())
    fail(ErrorKind::NoData, "need at least three (x, log height, log remainder) rows");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd yh(n), yf(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double x = xs[static_cast<std::size_t>(i)];
    a(i, 0) = x * std::log(x);
    a(i, 1) = x;
    a(i, 2) = 1;
    yh(i) = log_heights[static_cast<std::size_t>(i)];
    yf(i) = log_remainders[static_cast<std::size_t>(i)];
  }
  double c1 = a.colPivHouseholderQr().solve(yh)(0);
  double kappa = a.colPivHouseholderQr().solve(yf)(0);
  CramerInputs in;
  in.m = m;
  in.c1 = c1;
  in.c3 = 0.0;
  in.c2 = (c1 - kappa) / static_cast<double>(m);
  return in;
}

}  // namespace horolab
