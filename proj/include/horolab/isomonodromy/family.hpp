#pragma once

#include "horolab/isomonodromy/symbolic.hpp"

namespace horolab {

/// omega = P dz + Q dx, P and Q square matrices of SymExpr.
struct MatrixOneForm {
  SymMatrix dz_part;
  SymMatrix dx_part;
  std::size_t size() const { return dz_part.rows(); }
};

/// Coefficient of dz ^ dx in d(omega) - omega ^ omega:
///   (dQ/dz - dP/dx) - (P Q - Q P).
/// The zero matrix means d(omega) = omega ^ omega, the integrability of
/// dY = omega Y.
inline SymMatrix check_integrability(const MatrixOneForm& w) {
  const auto& p = w.dz_part;
  const auto& q = w.dx_part;
  if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows())
    fail(ErrorKind::DataError, "dz and dx parts must be square of equal size");
  SymMatrix d = sym_map(q, [](const SymExpr& e) { return e.diff_z(); }) -
                sym_map(p, [](const SymExpr& e) { return e.diff_x(); });
  return d - (p * q - q * p);
}

/// Same with the opposite sign of the wedge term, d(omega) + omega ^ omega
/// (integrability of dY = -omega Y). Reported for diagnosis only.
inline SymMatrix check_integrability_opposite(const MatrixOneForm& w) {
  const auto& p = w.dz_part;
  const auto& q = w.dx_part;
  SymMatrix d = sym_map(q, [](const SymExpr& e) { return e.diff_z(); }) -
                sym_map(p, [](const SymExpr& e) { return e.diff_x(); });
  return d + (p * q - q * p);
}

/// Exact check of dW/dx = [W, N] / x.
inline bool verify_deformation_equation(const SymMatrix& w, const SymMatrix& n) {
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j)
      for (const auto& v : w(i, j).variables())
        if (v != "x" && v != "L") fail(ErrorKind::SymbolicDomain, "W may depend on x and log(x) only, found " + v);
  SymMatrix lhs = sym_map(w, [](const SymExpr& e) { return e.diff_x(); });
  SymMatrix rhs = sym_map(w * n - n * w, [](const SymExpr& e) { return e / SymExpr::x(); });
  return (lhs - rhs).is_zero();
}

/// Parameters a, b, c as free symbols; L = log x.
namespace family {

inline SymExpr a() { return SymExpr::variable("a"); }
inline SymExpr b() { return SymExpr::variable("b"); }
inline SymExpr c() { return SymExpr::variable("c"); }
inline SymExpr L() { return SymExpr::log_x(); }

inline SymMatrix deformation_n() { return SymMatrix({{1, 1}, {0, 1}}); }

/// The four listed solutions of dW/dx = [W, N]/x, third as printed.
inline std::vector<SymMatrix> printed_basis() {
  return {SymMatrix({{1, L()}, {0, 0}}), SymMatrix({{0, 1}, {0, 0}}), SymMatrix({{-L(), -(L() * L())}, {1, 0}}),
          SymMatrix({{0, -L()}, {0, 1}})};
}

/// Third element with the (2,2) entry log x that the equation requires.
inline std::vector<SymMatrix> corrected_basis() {
  auto v = printed_basis();
  v[2](1, 1) = L();
  return v;
}

inline SymMatrix matrix_a() { return SymMatrix({{a(), (a() - b()) * L()}, {0, b()}}); }
inline SymMatrix printed_b() { return SymMatrix({{SymExpr(1) - L(), -(L() * L())}, {1, 1}}); }
inline SymMatrix corrected_b() { return SymMatrix({{SymExpr(1) - L(), -(L() * L())}, {1, SymExpr(1) + L()}}); }
inline SymMatrix residue_one() { return SymMatrix({{1, c()}, {0, 1}}); }

/// A / z^2 + B / z + C / (z - 1).
inline SymMatrix dz_part(const SymMatrix& bmat) {
  return SymExpr::power_product(-2, 0, 0) * matrix_a() + SymExpr::power_product(-1, 0, 0) * bmat +
         SymExpr::power_product(0, -1, 0) * residue_one();
}

/// The one-form as displayed: B as printed, dx part + N / x.
inline MatrixOneForm printed() {
  return {dz_part(printed_b()), SymExpr::power_product(0, 0, -1) * deformation_n()};
}

/// Literal reading with x itself (not log x) in A and B.
inline MatrixOneForm printed_literal() {
  auto lit = [](const SymMatrix& m) {
    return sym_map(m, [](const SymExpr& e) {
      // replace L by x
      SymExpr out;
      for (const auto& [mono, coef] : e.numerator()) {
        SymExpr t(coef);
        for (const auto& [v, k] : mono)
          for (int r = 0; r < k; ++r) t = t * (v == "L" ? SymExpr::x() : SymExpr::variable(v));
        out = out + t;
      }
      return out * SymExpr::power_product(-e.z_order(), -e.z1_order(), -e.x_order());
    });
  };
  return {lit(dz_part(printed_b())), SymExpr::power_product(0, 0, -1) * deformation_n()};
}

/// B corrected and dx part - N / x, so that d(omega) = omega ^ omega.
inline MatrixOneForm corrected() {
  return {dz_part(corrected_b()), SymExpr(-1) * (SymExpr::power_product(0, 0, -1) * deformation_n())};
}

/// dz part of the member with parameter t and numeric a, b, c. The family
/// parameter is log x (x itself for the literal reading); the dz parts
/// involve only one of the two, so both are set to t.
inline SymMatrix member(const MatrixOneForm& w, const Rational& t, const Rational& av, const Rational& bv,
                        const Rational& cv) {
  std::map<std::string, Rational> vals{{"L", t}, {"x", t}, {"a", av}, {"b", bv}, {"c", cv}};
  return sym_map(w.dz_part, [&](const SymExpr& e) { return e.substitute(vals); });
}

}  // namespace family

}  // namespace horolab
