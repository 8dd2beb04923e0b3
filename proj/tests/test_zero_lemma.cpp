#include <gtest/gtest.h>

#include <random>

#include "horolab/auxiliary/constructor.hpp"
#include "horolab/io/expression.hpp"
#include "horolab/zero_lemma/tower.hpp"

using namespace horolab;

namespace {

Rational q(long n, long d = 1) { return Rational(Integer(n), Integer(d)); }

DifferentialSystem diag(long a, long b) {
  RationalMatrix m(2, 2);
  m(0, 0) = RationalFunction(a);
  m(1, 1) = RationalFunction(b);
  return DifferentialSystem(m);
}

// (1, e^z) ordering used by the constructor
SeriesVector one_exp(std::size_t t) { return solve_series(diag(0, 1), q(0), t, {q(1), q(1)}); }

PolySection pade_section(std::size_t x) {
  ProblemTemplate tmpl{{q(0)}, solution_germs(diag(0, 1), {q(0)}, {{q(1), q(1)}}), OrderPolicy::Maximal};
  return construct_small_section(tmpl.at(x, 2)).section;
}

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    FAIL() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Tower, Examples) {
  DerivationField one{QPoly(1)};
  auto sys = diag(1, 2);
  auto germs = local_solution_basis(sys, q(0), 6)[0];
  auto t = analyze_tower(PolySection({QPoly(1), QPoly(1)}), sys, one, germs);
  EXPECT_EQ(t.rank, 2u);
  EXPECT_EQ(t.wronskian, QPoly(1));
  EXPECT_TRUE(t.rank_stabilized);

  auto c = analyze_tower(PolySection({QPoly(1), QPoly()}), diag(0, 0), one, germs);
  EXPECT_EQ(c.rank, 1u);
  EXPECT_TRUE(c.tower[1].is_zero());

  auto d = analyze_tower(PolySection({QPoly(1), QPoly(1)}), diag(1, 1), one, germs);
  EXPECT_EQ(d.rank, 1u);
  EXPECT_EQ(d.tower[1], d.tower[0]);

  expect_error(ErrorKind::TrivialInput, [&] { analyze_tower(PolySection({QPoly(), QPoly()}), sys, one, germs); });
}

TEST(Tower, VanishingOrder) {
  auto rem = pair(pade_section(2), one_exp(10));
  EXPECT_EQ(vanishing_order(rem).value, 5u);
  auto z = vanishing_order(TruncatedSeries::zero(q(0), 4));
  EXPECT_TRUE(z.saturated);
  EXPECT_EQ(z.value, 5u);
  EXPECT_EQ(vanishing_order(TruncatedSeries::from_polynomial(QPoly{q(1), q(1)}, q(0), 3)).value, 0u);
}

TEST(ZeroLemma, PadeFamilyHasConstantOne) {
  DerivationField one{QPoly(1)};
  for (std::size_t x = 2; x <= 10; ++x) {
    auto rep = zero_lemma_check(pade_section(x), diag(0, 1), one, one_exp(2 * (x + 2) + 4), x);
    EXPECT_EQ(rep.ord, 2 * x + 1);
    EXPECT_EQ(rep.rank, 2u);
    EXPECT_EQ(rep.measured_c, 1);
    EXPECT_TRUE(rep.ord_drop_ok);
    EXPECT_LE(rep.wedge_slack, 1);
  }
}

TEST(ZeroLemma, NonVanishingPairing) {
  auto rep = zero_lemma_check(PolySection({QPoly(1), QPoly()}, 3), diag(0, 1), {QPoly(1)}, one_exp(12), 3);
  EXPECT_EQ(rep.ord, 0u);
  EXPECT_EQ(rep.rank, 1u);  // P = (1, 0) against diag(0, 1) stays constant
  EXPECT_EQ(rep.measured_c, -3);
}

TEST(ZeroLemma, SaturationIsInsufficientTruncation) {
  expect_error(ErrorKind::InsufficientTruncation,
               [] { zero_lemma_check(pade_section(3), diag(0, 1), {QPoly(1)}, one_exp(5), 3); });
}

TEST(Wedge, Examples) {
  DerivationField one{QPoly(1)};
  auto w = nonvanishing_wedge_indices(PolySection({QPoly(1), QPoly(1)}), diag(1, 2), one, q(0), 2);
  EXPECT_EQ(w.indices, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(w.minor_value, q(1));

  auto p = nonvanishing_wedge_indices(pade_section(2), diag(0, 1), one, q(1), 6);
  EXPECT_EQ(p.indices.size(), 2u);
  EXPECT_FALSE(p.minor_value.is_zero());

  expect_error(ErrorKind::BoundTooSmall, [&] {
    nonvanishing_wedge_indices(PolySection({QPoly(1), QPoly(1)}), diag(1, 1), one, q(0), 5);
  });
}

TEST(Wedge, WronskianRootForcesLaterIndices) {
  // P = (z, 0) under diag(0, 1): rows (z, 0), (1, 0) are rank 1 alone, so take
  // P = (z, 1): rows (z,1), (1,1), (0,1); det rows 0,1 = z - 1 vanishes at 1.
  DerivationField one{QPoly(1)};
  auto w = nonvanishing_wedge_indices(PolySection({QPoly{q(0), q(1)}, QPoly(1)}), diag(0, 1), one, q(1), 3);
  EXPECT_EQ(w.indices, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(w.minor_value, q(1));
}

TEST(Properties, CramerIdentityAndRankStabilization) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coef(-3, 3);
  auto rpoly = [&](int deg) {
    std::vector<Rational> c;
    for (int k = 0; k <= deg; ++k) c.push_back(q(coef(rng)));
    return QPoly(c);
  };
  for (int trial = 0; trial < 12; ++trial) {
    std::size_t m = 1 + trial % 3;
    RationalMatrix a(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) a(i, j) = RationalFunction(rpoly(1), QPoly{q(1), q(1)});
    DifferentialSystem sys(a);
    auto der = DerivationField::clearing(sys);
    std::vector<QPoly> comps;
    for (std::size_t k = 0; k < m; ++k) comps.push_back(rpoly(2));
    PolySection p(comps);
    if (p.is_zero()) continue;
    auto germs = local_solution_basis(sys, q(0), 12)[0];
    auto t = analyze_tower(p, sys, der, germs);
    EXPECT_TRUE(t.rank_stabilized);
    EXPECT_TRUE(t.ord_drop_ok);
    auto f = differentiated_pairings(pair(p, germs), der, m);
    EXPECT_TRUE(cramer_identity_holds(t.minimal_submodule_basis, germs, f)) << "trial " << trial;
    EXPECT_TRUE(cramer_identity_holds({t.tower.begin(), t.tower.begin() + static_cast<long>(m)}, germs, f));
  }
}

TEST(Properties, CramerIdentityDetectsCorruption) {
  auto sys = diag(1, 2);
  auto germs = local_solution_basis(sys, q(0), 6)[0];
  auto t = derivative_tower(PolySection({QPoly{q(1), q(1)}, QPoly(1)}), sys, {QPoly(1)}, 1);
  auto f = differentiated_pairings(pair(t[0], germs), {QPoly(1)}, 2);
  EXPECT_TRUE(cramer_identity_holds(t, germs, f));
  auto wrong = f;
  wrong[1] = q(2) * wrong[1];
  EXPECT_FALSE(cramer_identity_holds(t, germs, wrong));
}
