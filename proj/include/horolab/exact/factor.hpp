#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "horolab/exact/rational.hpp"

namespace horolab {

namespace detail {

// Brent's variant of Pollard rho; returns a non-trivial factor or 0.
inline Integer pollard_brent(const Integer& n, unsigned long seed, unsigned long max_iter) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer y = seed % n, c = (seed * 7 + 1) % n, g = 1, r = 1, q = 1, x, ys;
  const unsigned long m = 64;
  auto f = [&](const Integer& v) {
    Integer w = v * v + c;
    mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
    return w;
  };
  unsigned long iter = 0;
  while (g == 1 && iter < max_iter) {
    x = y;
    for (Integer i = 0; i < r; ++i) y = f(y);
    Integer k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (unsigned long i = 0; i < m && k + i < r; ++i) {
        y = f(y);
        Integer d = abs(Integer(x - y));
        q = (q * d) % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
      iter += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      Integer d = abs(Integer(x - ys));
      mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return (g == n || g == 1) ? Integer(0) : g;
}

inline void split_cofactor(const Integer& n, std::set<Integer>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.insert(n);
    return;
  }
  for (unsigned long seed = 2; seed < 64; ++seed) {
    Integer d = pollard_brent(n, seed, 2000000);
    if (d != 0) {
      split_cofactor(d, out);
      split_cofactor(n / d, out);
      return;
    }
  }
  fail(ErrorKind::DataError, "could not factor cofactor " + n.get_str());
}

}  // namespace detail

/// Distinct prime divisors of |n| (n != 0), ascending. Trial division up to
/// `trial_bound`, then Pollard rho on whatever is left.
inline std::vector<Integer> prime_divisors(Integer n, unsigned long trial_bound = 1000) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "prime divisors of zero");
  n = abs(n);
  std::set<Integer> found;
  for (unsigned long p : primes_up_to(trial_bound)) {
    if (n == 1) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      found.insert(Integer(p));
      mpz_remove(n.get_mpz_t(), n.get_mpz_t(), Integer(p).get_mpz_t());
    }
  }
  detail::split_cofactor(n, found);
  return {found.begin(), found.end()};
}

}  // namespace horolab
