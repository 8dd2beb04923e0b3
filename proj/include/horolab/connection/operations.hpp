#pragma once

#include <map>
#include <vector>

#include "horolab/connection/system.hpp"

namespace horolab {

/// A vector-valued germ: one truncated series per coordinate.
using SeriesVector = std::vector<TruncatedSeries>;

/// Series solution of Y' = AY at an ordinary point with the given initial value,
/// from (k+1) c_{k+1} = sum_j A_j c_{k-j} with A = sum_j A_j (z-q)^j.
inline SeriesVector solve_series(const DifferentialSystem& sys, const Rational& q, std::size_t order,
                                 const std::vector<Rational>& initial) {
  const std::size_t m = sys.rank();
  if (initial.size() != m) fail(ErrorKind::InvalidArgument, "initial value has the wrong length");
  if (!sys.is_ordinary(q)) fail(ErrorKind::SingularPoint, q.str() + " is a pole of the system");
  std::vector<std::vector<std::vector<Rational>>> a(m, std::vector<std::vector<Rational>>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a[i][j] = sys(i, j).is_zero() ? std::vector<Rational>() : taylor_expand(sys(i, j), q, order).coefficients();

  std::vector<std::vector<Rational>> c(order + 1, std::vector<Rational>(m, Rational(0)));
  c[0] = initial;
  for (std::size_t k = 0; k < order; ++k) {
    const Rational inv(Integer(1), Integer(static_cast<long>(k + 1)));
    for (std::size_t i = 0; i < m; ++i) {
      Rational acc(0);
      for (std::size_t j = 0; j < m; ++j) {
        const auto& aij = a[i][j];
        for (std::size_t t = 0; t < aij.size() && t <= k; ++t)
          if (!aij[t].is_zero() && !c[k - t][j].is_zero()) acc += aij[t] * c[k - t][j];
      }
      c[k + 1][i] = acc * inv;
    }
  }
  SeriesVector out;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> s(order + 1);
    for (std::size_t k = 0; k <= order; ++k) s[k] = c[k][i];
    out.emplace_back(q, std::move(s));
  }
  return out;
}

/// The m solutions with initial values the standard unit vectors.
inline std::vector<SeriesVector> local_solution_basis(const DifferentialSystem& sys, const Rational& q,
                                                      std::size_t order) {
  std::vector<SeriesVector> basis;
  for (std::size_t j = 0; j < sys.rank(); ++j) {
    std::vector<Rational> e(sys.rank(), Rational(0));
    e[j] = Rational(1);
    basis.push_back(solve_series(sys, q, order, e));
  }
  return basis;
}

/// N*A as a polynomial matrix; throws when N leaves a pole behind.
inline DenseMatrix<QPoly> cleared_matrix(const DifferentialSystem& sys, const DerivationField& der) {
  if (der.multiplier.is_zero()) fail(ErrorKind::NonIntegralDerivation, "derivation multiplier is zero");
  const std::size_t m = sys.rank();
  DenseMatrix<QPoly> na(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      RationalFunction e = RationalFunction(der.multiplier) * sys(i, j);
      if (!e.is_polynomial())
        fail(ErrorKind::NonIntegralDerivation, "multiplier " + der.multiplier.str() + " does not clear " + sys(i, j).str());
      na(i, j) = e.num();
    }
  return na;
}

/// Degree growth per application of the dual derivative.
inline int derivative_degree_shift(const DifferentialSystem& sys, const DerivationField& der) {
  auto na = cleared_matrix(sys, der);
  int d = 0;
  for (std::size_t i = 0; i < na.rows(); ++i)
    for (std::size_t j = 0; j < na.cols(); ++j) d = std::max(d, na(i, j).degree());
  return std::max(0, der.multiplier.degree()) + d;
}

/// nabla(P) = N P' + P (N A), so that <nabla P, f> = N <P, f>' on solutions.
inline PolySection dual_derivative(const PolySection& p, const DifferentialSystem& sys, const DerivationField& der) {
  const std::size_t m = sys.rank();
  if (p.size() != m) fail(ErrorKind::PairingMismatch, "section length differs from the system rank");
  auto na = cleared_matrix(sys, der);
  std::vector<QPoly> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    QPoly acc = der.multiplier * p.components[j].derivative();
    for (std::size_t i = 0; i < m; ++i)
      if (!p.components[i].is_zero()) acc += p.components[i] * na(i, j);
    out[j] = std::move(acc);
  }
  return PolySection(std::move(out), p.degree_bound + derivative_degree_shift(sys, der));
}

inline std::vector<PolySection> derivative_tower(const PolySection& p, const DifferentialSystem& sys,
                                                 const DerivationField& der, std::size_t length) {
  std::vector<PolySection> tower{p};
  for (std::size_t i = 0; i < length; ++i) tower.push_back(dual_derivative(tower.back(), sys, der));
  return tower;
}

/// Exponent vectors of degree n in m variables, lexicographically descending
/// (y1^n first, ym^n last).
inline std::vector<std::vector<int>> monomial_exponents(std::size_t m, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m, 0);
  auto rec = [&](auto&& self, std::size_t k, int left) -> void {
    if (k + 1 == m) {
      cur[k] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[k] = e;
      self(self, k + 1, left - e);
    }
  };
  rec(rec, 0, n);
  return out;
}

/// Induced system on degree-n monomials of the solution coordinates.
inline DifferentialSystem symmetric_power_system(const DifferentialSystem& sys, int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "symmetric power needs n >= 1");
  const std::size_t m = sys.rank();
  auto mons = monomial_exponents(m, n);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t k = 0; k < mons.size(); ++k) index[mons[k]] = k;
  RationalMatrix out(mons.size(), mons.size());
  for (std::size_t r = 0; r < mons.size(); ++r) {
    const auto& alpha = mons[r];
    for (std::size_t j = 0; j < m; ++j) {
      if (alpha[j] == 0) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (sys(j, k).is_zero()) continue;
        auto beta = alpha;
        --beta[j];
        ++beta[k];
        out(r, index.at(beta)) += RationalFunction(alpha[j]) * sys(j, k);
      }
    }
  }
  return DifferentialSystem(std::move(out));
}

/// Degree-n monomials of a vector germ, in monomial_exponents order.
inline SeriesVector monomial_lift(const SeriesVector& f, int n) {
  SeriesVector out;
  if (f.empty()) return out;
  for (const auto& alpha : monomial_exponents(f.size(), n)) {
    TruncatedSeries acc = TruncatedSeries::from_polynomial(QPoly(1), f[0].base_point(), f[0].order());
    for (std::size_t k = 0; k < f.size(); ++k)
      for (int e = 0; e < alpha[k]; ++e) acc = acc * f[k];
    out.push_back(std::move(acc));
  }
  return out;
}

/// <P, f> = sum_k P_k f_k at the common base point of the germs.
inline TruncatedSeries pair(const PolySection& p, const SeriesVector& germs) {
  if (germs.empty() || p.size() != germs.size())
    fail(ErrorKind::PairingMismatch, "section and germ vector have different lengths");
  const Rational& q = germs[0].base_point();
  const std::size_t t = germs[0].order();
  for (const auto& g : germs)
    if (g.base_point() != q || g.order() != t)
      fail(ErrorKind::PairingMismatch, "germs differ in base point or truncation order");
  TruncatedSeries acc = TruncatedSeries::zero(q, t);
  for (std::size_t k = 0; k < germs.size(); ++k)
    if (!p.components[k].is_zero()) acc = acc + p.components[k] * germs[k];
  return acc;
}

}  // namespace horolab
