#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "horolab/connection/operations.hpp"

namespace horolab {

/// Vanishing order of a truncated series: either an index or "saturated at T".
struct VanishingOrder {
  std::size_t value = 0;  // T + 1 when saturated
  bool saturated = false;
};

inline VanishingOrder vanishing_order(const TruncatedSeries& f) {
  auto o = f.vanishing_order();
  return o ? VanishingOrder{*o, false} : VanishingOrder{f.order() + 1, true};
}

inline DenseMatrix<QPoly> tower_matrix(const std::vector<PolySection>& rows) {
  DenseMatrix<QPoly> m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i].components[j];
  return m;
}

/// k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  for (;;) {
    out.push_back(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

struct TowerAnalysis {
  std::vector<PolySection> tower;           // P_0 .. P_m (one step past the rank check)
  std::size_t rank = 0;
  QPoly wronskian;                          // first non-zero maximal minor of P_0..P_{r-1}
  std::vector<std::size_t> wronskian_columns;
  std::vector<PolySection> minimal_submodule_basis;
  std::vector<VanishingOrder> orders;       // ord_Q <P_i, f>
  bool rank_stabilized = true;              // rank of P_0..P_m equals r
  bool ord_drop_ok = true;                  // ord F_{i+1} >= ord F_i - 1 (unsaturated steps)
  int wedge_degree = -1;                    // max degree of the r x r minors of P_0..P_{r-1}
};

inline TowerAnalysis analyze_tower(const PolySection& p, const DifferentialSystem& sys, const DerivationField& der,
                                   const SeriesVector& germs) {
  if (p.is_zero()) fail(ErrorKind::TrivialInput, "zero section generates the zero submodule");
  const std::size_t m = sys.rank();
  TowerAnalysis out;
  out.tower = derivative_tower(p, sys, der, m);

  std::size_t r = 0;
  while (r < m && rank(tower_matrix({out.tower.begin(), out.tower.begin() + static_cast<long>(r) + 1})) == r + 1) ++r;
  out.rank = r;
  out.rank_stabilized = rank(tower_matrix(out.tower)) == r;
  out.minimal_submodule_basis.assign(out.tower.begin(), out.tower.begin() + static_cast<long>(r));

  auto basis = tower_matrix(out.minimal_submodule_basis);
  std::vector<std::size_t> rows(r);
  for (std::size_t i = 0; i < r; ++i) rows[i] = i;
  for (const auto& cols : combinations(m, r)) {
    QPoly d = determinant(basis.submatrix(rows, cols));
    out.wedge_degree = std::max(out.wedge_degree, d.degree());
    if (out.wronskian.is_zero() && !d.is_zero()) {
      out.wronskian = d;
      out.wronskian_columns = cols;
    }
  }

  for (const auto& pi : out.tower) out.orders.push_back(vanishing_order(pair(pi, germs)));
  for (std::size_t i = 0; i + 1 < out.orders.size(); ++i) {
    const auto &a = out.orders[i], &b = out.orders[i + 1];
    if (!a.saturated && !b.saturated && b.value + 1 < a.value) out.ord_drop_ok = false;
  }
  return out;
}

struct ZeroLemmaReport {
  std::size_t x = 0;
  std::size_t rank = 0;
  std::size_t ord = 0;
  long measured_c = 0;  // ord - x * rank
  bool ord_drop_ok = true;
  int wedge_degree = -1;
  long wedge_slack = 0;  // wedge_degree - rank * x
};

inline ZeroLemmaReport zero_lemma_check(const PolySection& p, const DifferentialSystem& sys, const DerivationField& der,
                                        const SeriesVector& germs, std::size_t x) {
  auto t = analyze_tower(p, sys, der, germs);
  if (t.orders[0].saturated)
    fail(ErrorKind::InsufficientTruncation, "pairing vanishes through the whole truncation; raise T");
  ZeroLemmaReport r;
  r.x = x;
  r.rank = t.rank;
  r.ord = t.orders[0].value;
  r.measured_c = static_cast<long>(r.ord) - static_cast<long>(x * t.rank);
  r.ord_drop_ok = t.ord_drop_ok;
  r.wedge_degree = t.wedge_degree;
  r.wedge_slack = t.wedge_degree - static_cast<long>(t.rank * x);
  return r;
}

/// F_0, N F_0', N (N F_0')', ...: the pairings of the tower obtained by
/// differentiating the series instead of the sections.
inline std::vector<TruncatedSeries> differentiated_pairings(const TruncatedSeries& f0, const DerivationField& der,
                                                            std::size_t count) {
  std::vector<TruncatedSeries> out{f0};
  for (std::size_t i = 1; i < count; ++i) {
    if (out.back().order() == 0) fail(ErrorKind::InsufficientTruncation, "series too short to differentiate");
    out.push_back(der.multiplier * out.back().derivative());
  }
  return out;
}

/// Cramer identity on truncated series. With M the r x m tower matrix,
/// F_i the pairing series of row i and J any (r-1)-subset of columns:
///   sum_i (-1)^(i+r-1) det(M_J without row i) F_i = sum_{k not in J} det[M_J | M_k] f_k.
/// The F_i are supplied by the caller (e.g. from differentiated_pairings), so
/// the check compares the section side against the series side. Compared up
/// to the shortest truncation involved.
inline bool cramer_identity_holds(const std::vector<PolySection>& rows, const SeriesVector& germs,
                                  const std::vector<TruncatedSeries>& f) {
  if (rows.empty()) return true;
  const std::size_t r = rows.size(), m = rows[0].size();
  if (f.size() < r) fail(ErrorKind::PairingMismatch, "one pairing series per tower row is required");
  const Rational& q = germs.at(0).base_point();
  std::size_t t = germs[0].order();
  for (std::size_t i = 0; i < r; ++i) t = std::min(t, f[i].order());
  auto mat = tower_matrix(rows);
  std::vector<std::size_t> all(r);
  for (std::size_t k = 0; k < r; ++k) all[k] = k;
  for (const auto& j : combinations(m, r - 1)) {
    TruncatedSeries lhs = TruncatedSeries::zero(q, t), rhs = TruncatedSeries::zero(q, t);
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<std::size_t> others;
      for (std::size_t k = 0; k < r; ++k)
        if (k != i) others.push_back(k);
      QPoly minor = determinant(mat.submatrix(others, j));
      if ((i + r - 1) % 2) minor = -minor;
      lhs = lhs + minor * f[i].truncated(t);
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (std::find(j.begin(), j.end(), k) != j.end()) continue;
      auto cols = j;
      cols.push_back(k);
      rhs = rhs + determinant(mat.submatrix(all, cols)) * germs[k].truncated(t);
    }
    if (!(lhs == rhs)) return false;
  }
  return true;
}

struct WedgeIndices {
  std::vector<std::size_t> indices;
  Rational minor_value;
};

/// Lexicographically least l_1 < ... < l_m <= bound whose tower minor is
/// non-zero at q.
inline WedgeIndices nonvanishing_wedge_indices(const PolySection& p, const DifferentialSystem& sys,
                                               const DerivationField& der, const Rational& q, std::size_t bound) {
  if (!sys.is_ordinary(q)) fail(ErrorKind::SingularPoint, q.str() + " is a pole of the system");
  const std::size_t m = sys.rank();
  auto tower = derivative_tower(p, sys, der, bound);
  DenseMatrix<Rational> at_q(tower.size(), m);
  for (std::size_t i = 0; i < tower.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) at_q(i, j) = tower[i].components[j](q);
  std::vector<std::size_t> cols(m);
  for (std::size_t j = 0; j < m; ++j) cols[j] = j;
  for (const auto& rows : combinations(bound + 1, m)) {
    Rational d = determinant(at_q.submatrix(rows, cols));
    if (!d.is_zero()) return {rows, d};
  }
  fail(ErrorKind::BoundTooSmall, "no non-vanishing wedge among tower rows 0.." + std::to_string(bound));
}

}  // namespace horolab
