#include <gtest/gtest.h>

#include <random>

#include "horolab/isomonodromy/family.hpp"
#include "horolab/isomonodromy/monodromy.hpp"

using namespace horolab;

namespace {

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    FAIL() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

Rational q(long n, long d = 1) { return Rational(Integer(n), Integer(d)); }

SymExpr sym(const std::string& s) { return parse_sym(s, {"a", "b", "c"}); }

double eval_at(const SymExpr& e, double z, double x) {
  return e.evaluate<double>([&](const std::string& v) {
    if (v == "z") return z;
    if (v == "x") return x;
    if (v == "L") return std::log(x);
    if (v == "a") return 0.3;
    if (v == "b") return -1.7;
    return 2.2;
  });
}

std::complex<double> hp_to_std(const HpComplex& v) {
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

}  // namespace

TEST(Symbolic, CanonicalForms) {
  EXPECT_TRUE((sym("(z-1)/(z-1)") - SymExpr(1)).is_zero());
  EXPECT_EQ(sym("z/(z*(z-1))"), sym("1/(z-1)"));
  EXPECT_TRUE((sym("1/z - 1/(z-1) + 1/(z*(z-1))")).is_zero());
  EXPECT_EQ(sym("(z^2 - 2*z + 1)/(z-1)^3").z1_order(), 1);
  EXPECT_EQ(sym("(z^2 - 2*z + 1)/(z-1)^3").numerator().size(), 1u);
  EXPECT_EQ(sym("x^2/x").x_order(), 0);
  EXPECT_EQ(sym("log(x)^2").str(), "log(x)^2");
}

TEST(Symbolic, Derivatives) {
  EXPECT_EQ(sym("1/(z-1)").diff_z(), sym("-1/(z-1)^2"));
  EXPECT_EQ(sym("log(x)^2").diff_x(), sym("2*log(x)/x"));
  EXPECT_EQ(sym("x*log(x)").diff_x(), sym("log(x) + 1"));
  EXPECT_EQ(sym("a/z^2 + b*x/(z-1)").diff_z(), sym("-2*a/z^3 - b*x/(z-1)^2"));
}

TEST(Symbolic, DerivativesMatchFiniteDifferences) {
  std::mt19937 rng(7);
  const std::vector<std::string> atoms = {"z", "x", "log(x)", "a", "1/z", "1/(z-1)", "1/x", "(z-1)^2", "3/2", "b*z"};
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  for (int trial = 0; trial < 40; ++trial) {
    std::string text = "0";
    for (int t = 0; t < 3; ++t) text += " + " + atoms[pick(rng)] + "*" + atoms[pick(rng)] + "*" + atoms[pick(rng)];
    SymExpr e = sym(text);
    const double z0 = 0.37, x0 = 1.9, h = 1e-5;
    double fdz = (eval_at(e, z0 + h, x0) - eval_at(e, z0 - h, x0)) / (2 * h);
    double fdx = (eval_at(e, z0, x0 + h) - eval_at(e, z0, x0 - h)) / (2 * h);
    EXPECT_NEAR(eval_at(e.diff_z(), z0, x0), fdz, 1e-5 * (1 + std::fabs(fdz))) << text;
    EXPECT_NEAR(eval_at(e.diff_x(), z0, x0), fdx, 1e-5 * (1 + std::fabs(fdx))) << text;
    EXPECT_NEAR(eval_at(e, z0, x0), eval_at(sym(text + " - 0"), z0, x0), 1e-12);
  }
}

TEST(Symbolic, DomainErrors) {
  expect_error(ErrorKind::SymbolicDomain, [] { sym("1/(z+1)"); });
  expect_error(ErrorKind::SymbolicDomain, [] { sym("log(z)"); });
  expect_error(ErrorKind::SymbolicDomain, [] { sym("1/(z-z)"); });
  expect_error(ErrorKind::SyntaxError, [] { parse_sym("d*z"); });
}

TEST(Integrability, CorrectedFamilyIsExactlyIntegrable) {
  EXPECT_TRUE(check_integrability(family::corrected()).is_zero());
  // the corrected B with the printed dx part satisfies the opposite-sign condition
  MatrixOneForm plus{family::dz_part(family::corrected_b()), family::printed().dx_part};
  EXPECT_TRUE(check_integrability_opposite(plus).is_zero());
  EXPECT_FALSE(check_integrability(plus).is_zero());
}

TEST(Integrability, PrintedFamilyHasResidual) {
  auto r = check_integrability(family::printed());
  EXPECT_FALSE(r.is_zero());
  EXPECT_FALSE(check_integrability_opposite(family::printed()).is_zero());
  EXPECT_FALSE(check_integrability(family::printed_literal()).is_zero());
  EXPECT_FALSE(check_integrability_opposite(family::printed_literal()).is_zero());
}

TEST(Integrability, PerturbationAndTrivialForms) {
  auto w = family::corrected();
  w.dz_part(0, 0) += SymExpr::power_product(-1, 0, 0);  // B(1,1) + 1
  EXPECT_FALSE(check_integrability(w).is_zero());
  MatrixOneForm flat{SymMatrix({{sym("1/z"), sym("a/(z-1)")}, {sym("z^2"), 0}}), SymMatrix(2, 2)};
  EXPECT_TRUE(check_integrability(flat).is_zero());
}

TEST(Deformation, ListedBasis) {
  auto n = family::deformation_n();
  auto printed = family::printed_basis();
  EXPECT_TRUE(verify_deformation_equation(printed[0], n));
  EXPECT_TRUE(verify_deformation_equation(printed[1], n));
  EXPECT_FALSE(verify_deformation_equation(printed[2], n));
  EXPECT_TRUE(verify_deformation_equation(printed[3], n));
  for (const auto& w : family::corrected_basis()) EXPECT_TRUE(verify_deformation_equation(w, n));
  EXPECT_TRUE(verify_deformation_equation(SymMatrix::identity(2), n));
  EXPECT_FALSE(verify_deformation_equation(SymMatrix({{SymExpr::x(), 0}, {0, 0}}), n));
  expect_error(ErrorKind::SymbolicDomain,
               [&] { verify_deformation_equation(SymMatrix({{sym("a"), 0}, {0, 0}}), n); });
}

TEST(Deformation, FamilyCoefficientsAreBasisCombinations) {
  auto v = family::corrected_basis();
  auto a = family::a(), b = family::b();
  EXPECT_EQ(family::matrix_a(), a * v[0] + b * v[3]);
  EXPECT_EQ(family::corrected_b(), v[0] + v[2] + v[3]);
  auto p = family::printed_basis();
  EXPECT_EQ(family::printed_b(), p[0] + p[2] + p[3]);
}

TEST(Monodromy, DiagonalFuchsian) {
  SymMatrix a({{sym("1/(3*z)"), 0}, {0, sym("-1/(4*z)")}});
  auto sys = complex_system(a);
  auto m = numerical_monodromy(sys, Loop{{0, 0}, 0.5, 1, 0}, 30);
  EXPECT_GE(m.digits, 30);
  auto e = m.matrix.to_eigen();
  EXPECT_LT(std::abs(e(0, 0) - std::polar(1.0, 2 * M_PI / 3)), 1e-14);
  EXPECT_LT(std::abs(e(1, 1) - std::polar(1.0, -2 * M_PI / 4)), 1e-14);
  EXPECT_LT(std::abs(e(0, 1)) + std::abs(e(1, 0)), 1e-14);
  // the high-precision value itself
  HpComplex want = exp(HpComplex(0, 2) * boost::math::constants::pi<HpReal>() / 3);
  EXPECT_LT(static_cast<double>(abs(m.matrix(0, 0) - want)), 1e-28);
  EXPECT_LT(m.liouville_error, 1e-20);
  // clockwise loop gives the inverse
  auto cw = numerical_monodromy(sys, Loop{{0, 0}, 0.5, -1, 0}, 20);
  EXPECT_LT((cw.matrix.to_eigen() * e - Eigen::Matrix2cd::Identity()).norm(), 1e-14);
}

TEST(Monodromy, LoopWithoutSingularityIsIdentity) {
  auto sys = complex_system(family::member(family::corrected(), q(1), q(1, 2), q(1, 3), q(1)));
  auto m = numerical_monodromy(sys, Loop{{2.5, 0}, 0.5, 1, 0.25}, 25);
  EXPECT_LT((m.matrix.to_eigen() - Eigen::Matrix2cd::Identity()).norm(), 1e-20);
}

TEST(Monodromy, PathErrors) {
  auto sys = complex_system(family::member(family::corrected(), q(1), q(1, 2), q(1, 3), q(1)));
  expect_error(ErrorKind::PathError, [&] { numerical_monodromy(sys, Loop{{0, 0}, 1.0, 1, 0}, 20); });
  expect_error(ErrorKind::PathError, [&] { numerical_monodromy(sys, Loop{{0.5, 0}, 0.45, 1, 0}, 20); });
}

TEST(Monodromy, FamilyLoopAroundOneIsUnipotent) {
  auto sys = complex_system(family::member(family::corrected(), q(1), q(1, 2), q(1, 3), q(1)));
  Loop around1{{1, 0}, 0.5, 1, 0.5};
  auto m30 = numerical_monodromy(sys, around1, 30);
  auto m20 = numerical_monodromy(sys, around1, 20);
  auto e = m30.matrix.to_eigen();
  EXPECT_LT((e - m20.matrix.to_eigen()).norm(), 1e-15 * e.norm());
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(e);
  for (int i = 0; i < 2; ++i) EXPECT_LT(std::abs(es.eigenvalues()(i) - 1.0), 1e-6);
  EXPECT_GT((e - Eigen::Matrix2cd::Identity()).norm(), 1e-3);
  EXPECT_LT(std::abs(e.determinant() - 1.0), 1e-12);
  EXPECT_LT(m30.liouville_error, 1e-20);
}

TEST(Conjugacy, IdentityAndRandomConjugation) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<Eigen::MatrixXcd> m;
  for (int k = 0; k < 2; ++k) {
    Eigen::MatrixXcd a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = {u(rng), u(rng)};
    m.push_back(a);
  }
  auto same = conjugacy_check(m, m);
  EXPECT_TRUE(same.conjugate);
  EXPECT_TRUE(same.unique);
  EXPECT_LT(same.residual, 1e-12);
  Eigen::MatrixXcd t = same.transform / same.transform(0, 0);
  EXPECT_LT((t - Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-10);

  Eigen::MatrixXcd p(3, 3);
  p << 2, 1, 0, -1, 3, 1, 0, 1, 1;
  std::vector<Eigen::MatrixXcd> conj;
  for (const auto& a : m) conj.push_back(p * a * p.inverse());
  auto r = conjugacy_check(m, conj);
  EXPECT_TRUE(r.conjugate);
  EXPECT_LE(r.residual, 1e-8);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_LT((r.transform * m[i] - conj[i] * r.transform).norm(), 1e-8);
  auto back = conjugacy_check(conj, m);
  EXPECT_EQ(back.conjugate, r.conjugate);
}

TEST(Conjugacy, DetectsNonConjugateAndAmbiguity) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2), b = a;
  a.diagonal() << 1.0, 2.0;
  b.diagonal() << 1.0, 3.0;
  auto r = conjugacy_check({a}, {b});
  EXPECT_FALSE(r.conjugate);
  EXPECT_FALSE(conjugacy_check({b}, {a}).conjugate);
  // a single diagonal matrix commutes with all diagonals: T not unique
  auto amb = conjugacy_check({a}, {a});
  EXPECT_TRUE(amb.conjugate);
  EXPECT_FALSE(amb.unique);
  EXPECT_EQ(amb.null_dimension, 2u);
}

TEST(Conjugacy, CorrectedFamilyMembersShareMonodromy) {
  auto mono = [](const MatrixOneForm& w, const Rational& t) {
    auto sys = complex_system(family::member(w, t, q(1, 2), q(1, 3), q(1)));
    std::vector<Eigen::MatrixXcd> out;
    for (const Loop& l : {Loop{{0, 0}, 0.5, 1, 0}, Loop{{1, 0}, 0.5, 1, 0.5}})
      out.push_back(numerical_monodromy(sys, l, 30).matrix.to_eigen());
    return out;
  };
  auto rep = conjugacy_check(mono(family::corrected(), q(1)), mono(family::corrected(), q(2)));
  EXPECT_TRUE(rep.conjugate) << rep.verdict;
  EXPECT_LE(rep.residual, 1e-6);
  auto printed = conjugacy_check(mono(family::printed(), q(1)), mono(family::printed(), q(2)));
  EXPECT_FALSE(printed.conjugate) << printed.residual;
}
