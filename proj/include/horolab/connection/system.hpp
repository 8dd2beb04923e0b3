#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "horolab/exact/matrix.hpp"
#include "horolab/exact/series.hpp"

namespace horolab {

/// Pole divisor D of a connection on P^1. Rational points are listed
/// explicitly; poles at irrational algebraic points are kept as the monic
/// squarefree factor `irrational_part` (empty when there are none).
struct PoleDivisor {
  std::vector<std::pair<Rational, int>> finite;
  int at_infinity = 0;
  QPoly irrational_part = QPoly(1);

  int multiplicity_at(const Rational& q) const {
    for (const auto& [p, m] : finite)
      if (p == q) return m;
    return 0;
  }
  bool contains(const Rational& q) const {
    return multiplicity_at(q) > 0 || irrational_part(q).is_zero();
  }
  int degree() const {
    int d = at_infinity + irrational_part.degree();
    for (const auto& [p, m] : finite) d += m;
    return d;
  }
};

using RationalMatrix = DenseMatrix<RationalFunction>;

/// Y' = A Y over Q(z).
class DifferentialSystem {
 public:
  explicit DifferentialSystem(RationalMatrix a) : a_(std::move(a)) {
    check_square();
    divisor_ = compute_divisor(a_);
  }

  /// With an explicitly supplied divisor, which must dominate the poles of A.
  DifferentialSystem(RationalMatrix a, PoleDivisor supplied) : a_(std::move(a)) {
    check_square();
    PoleDivisor actual = compute_divisor(a_);
    for (const auto& [p, m] : actual.finite)
      if (supplied.multiplicity_at(p) < m)
        fail(ErrorKind::DataError, "pole divisor misses the pole at " + p.str() + " of multiplicity " + std::to_string(m));
    if (supplied.at_infinity < actual.at_infinity)
      fail(ErrorKind::DataError, "pole divisor misses the pole at infinity");
    if (actual.irrational_part.degree() > 0 &&
        !divmod(supplied.irrational_part, actual.irrational_part).second.is_zero())
      fail(ErrorKind::DataError, "pole divisor misses irrational poles");
    divisor_ = std::move(supplied);
  }

  std::size_t rank() const { return a_.rows(); }
  const RationalMatrix& matrix() const { return a_; }
  const RationalFunction& operator()(std::size_t i, std::size_t j) const { return a_(i, j); }
  const PoleDivisor& pole_divisor() const { return divisor_; }

  bool is_ordinary(const Rational& q) const {
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j)
        if (a_(i, j).has_pole_at(q)) return false;
    return true;
  }

  /// Least common multiple of the entry denominators (monic).
  QPoly denominator_lcm() const {
    QPoly l(1);
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) {
        const QPoly& d = a_(i, j).den();
        l = exact_div(l * d, gcd(l, d));
      }
    return make_monic(l);
  }

  static PoleDivisor compute_divisor(const RationalMatrix& a) {
    PoleDivisor div;
    QPoly irr(1);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        const auto& f = a(i, j);
        div.at_infinity = std::max(div.at_infinity, f.pole_order_at_infinity_of_form());
        QPoly rest = f.den();
        for (const auto& [p, m] : rational_roots(f.den())) {
          bool found = false;
          for (auto& [q, mm] : div.finite)
            if (q == p) {
              mm = std::max(mm, m);
              found = true;
            }
          if (!found) div.finite.emplace_back(p, m);
          for (int k = 0; k < m; ++k) rest = exact_div(rest, QPoly{-p, Rational(1)});
        }
        if (rest.degree() > 0) {
          QPoly sq = exact_div(rest, gcd(rest, rest.derivative()));
          irr = exact_div(irr * sq, gcd(irr, sq));
        }
      }
    std::sort(div.finite.begin(), div.finite.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    div.irrational_part = make_monic(irr);
    return div;
  }

 private:
  void check_square() const {
    if (a_.rows() == 0 || a_.rows() != a_.cols())
      fail(ErrorKind::InvalidArgument, "system matrix must be square with rank >= 1");
  }

  RationalMatrix a_;
  PoleDivisor divisor_;
};

/// The derivation N(z) d/dz; N must clear every pole of A.
struct DerivationField {
  QPoly multiplier = QPoly(1);

  /// The smallest monic choice, lcm of the denominators of A.
  static DerivationField clearing(const DifferentialSystem& sys) { return {sys.denominator_lcm()}; }
};

/// Row vector of polynomials pairing against column solutions.
struct PolySection {
  std::vector<QPoly> components;
  int degree_bound = 0;

  PolySection() = default;
  explicit PolySection(std::vector<QPoly> comps, std::optional<int> bound = std::nullopt)
      : components(std::move(comps)) {
    int d = 0;
    for (const auto& c : components) d = std::max(d, c.degree());
    degree_bound = bound.value_or(d);
    if (d > degree_bound) fail(ErrorKind::InvalidArgument, "section component exceeds its degree bound");
  }

  std::size_t size() const { return components.size(); }
  bool is_zero() const {
    return std::all_of(components.begin(), components.end(), [](const QPoly& p) { return p.is_zero(); });
  }
  int max_degree() const {
    int d = -1;
    for (const auto& c : components) d = std::max(d, c.degree());
    return d;
  }
  friend bool operator==(const PolySection& a, const PolySection& b) { return a.components == b.components; }
};

}  // namespace horolab
