#include <gtest/gtest.h>

#include "horolab/exact/factor.hpp"
#include "horolab/lg/certifier.hpp"

using namespace horolab;

namespace {

Rational q(long n, long d = 1) { return Rational(Integer(n), Integer(d)); }

TruncatedSeries exp_series(std::size_t t) {
  std::vector<Rational> c;
  for (std::size_t j = 0; j <= t; ++j) c.emplace_back(Integer(1), factorial(j));
  return {q(0), c};
}

TruncatedSeries inv_factorial_squared(std::size_t t) {
  std::vector<Rational> c;
  for (std::size_t j = 0; j <= t; ++j) {
    Integer f = factorial(j);
    c.emplace_back(Integer(1), Integer(f * f));
  }
  return {q(0), c};
}

// e^{z^2}: a_{2k} = 1/k!
TruncatedSeries exp_z2_series(std::size_t t) {
  std::vector<Rational> c(t + 1, q(0));
  for (std::size_t k = 0; 2 * k <= t; ++k) c[2 * k] = Rational(Integer(1), factorial(k));
  return {q(0), c};
}

}  // namespace

TEST(Factor, PrimeDivisors) {
  EXPECT_EQ(prime_divisors(Integer(3628800)), (std::vector<Integer>{2, 3, 5, 7}));
  // cofactor beyond the trial bound: 1000003 * 1000033
  Integer n = Integer(1000003) * Integer(1000033) * 8;
  EXPECT_EQ(prime_divisors(n, 100), (std::vector<Integer>{2, 1000003, 1000033}));
  EXPECT_EQ(prime_divisors(Integer(-1)), std::vector<Integer>{});
}

TEST(CertifyLg, ExponentialIsCleanAtTypeOne) {
  auto c = certify_lg({exp_series(500)}, q(1));
  EXPECT_TRUE(c.clean());
  EXPECT_EQ(c.truncation_order, 500u);
  EXPECT_FALSE(c.first_violation);
  EXPECT_EQ(c.slope_sum(), 0.0);
}

TEST(CertifyLg, InverseFactorialSquaredNeedsTypeTwo) {
  auto c1 = certify_lg({inv_factorial_squared(50)}, q(1));
  EXPECT_FALSE(c1.clean());
  ASSERT_TRUE(c1.first_violation);
  EXPECT_EQ(*c1.first_violation, 2u);  // 1/(2!)^2 exceeds 1/2! at p = 2
  // oracle for p = 2: max_i v_2(i!)/i over 1 <= i <= 50
  Rational best(0);
  for (long i = 1; i <= 50; ++i) {
    Rational s = Rational(static_cast<long>(factorial_valuation(i, 2))) / q(i);
    if (best < s) best = s;
  }
  EXPECT_EQ(c1.bad_primes.front().prime, Integer(2));
  EXPECT_EQ(c1.bad_primes.front().slope, best);

  auto sweep = lg_slope_sweep({inv_factorial_squared(200)}, q(1), {50, 100, 200});
  EXPECT_TRUE(sweep.growing);
  EXPECT_LT(sweep.bad_prime_counts[0], sweep.bad_prime_counts[2]);

  EXPECT_TRUE(certify_lg({inv_factorial_squared(500)}, q(2)).clean());
}

TEST(CertifyLg, EmptyInputIsNoData) {
  try {
    certify_lg({}, q(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoData);
  }
}

TEST(CertifyLg, SlopesMonotoneInTruncation) {
  auto g = inv_factorial_squared(120);
  std::vector<Rational> prev;
  for (std::size_t t : {10, 30, 60, 120}) {
    auto c = certify_lg({g.truncated(t)}, q(1));
    std::vector<Rational> now;
    for (const auto& b : c.bad_primes)
      if (b.prime <= 7) now.push_back(b.slope);
    for (std::size_t k = 0; k < prev.size(); ++k) EXPECT_LE(prev[k], now[k]);
    prev = now;
  }
  for (std::size_t t : {5, 50, 300}) EXPECT_TRUE(certify_lg({exp_series(t)}, q(1)).clean());
}

TEST(CertifyLg, ProductCertifiesAtSummedType) {
  auto prod = exp_series(100) * inv_factorial_squared(100);
  EXPECT_TRUE(certify_lg({prod}, q(3)).clean());
  auto e2 = exp_series(100) * exp_series(100);
  EXPECT_TRUE(certify_lg({e2}, q(2)).clean());
}

TEST(GrowthOrder, Examples) {
  auto e = coefficient_growth_order(exp_series(400));
  EXPECT_NEAR(e.rho, 1.0, 0.05);
  auto e2 = coefficient_growth_order(exp_z2_series(400));
  EXPECT_NEAR(e2.rho, 2.0, 0.1);
  auto poly = TruncatedSeries::from_polynomial(QPoly{q(1), q(2), q(3)}, q(0), 100);
  EXPECT_EQ(growth_order_or_zero(poly).rho, 0.0);
  try {
    coefficient_growth_order(poly);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::PolynomialInput);
  }
}

TEST(GrowthOrder, InvariantUnderPolynomialFactor) {
  auto base = coefficient_growth_order(exp_series(400)).rho;
  auto scaled = coefficient_growth_order(QPoly{q(1), q(-4), q(3, 2)} * exp_series(400)).rho;
  EXPECT_NEAR(base, scaled, 0.05);
}

TEST(ESection, Balance) {
  auto ce = certify_lg({exp_series(200)}, q(1));
  auto ge = coefficient_growth_order(exp_series(400));
  EXPECT_TRUE(check_e_section(ce, ge, 1).accepted);
  auto c2 = certify_lg({exp_z2_series(200)}, q(1));
  auto g2 = coefficient_growth_order(exp_z2_series(400));
  EXPECT_FALSE(check_e_section(c2, g2, 1).accepted);
  EXPECT_TRUE(check_e_section(c2, g2, 2).accepted);
}
