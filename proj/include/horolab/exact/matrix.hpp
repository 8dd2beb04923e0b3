#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "horolab/exact/rational_function.hpp"

namespace horolab {

/// Row-major dense matrix over an exact ring.
template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}
  DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& r : init) {
      if (r.size() != cols_) fail(ErrorKind::InvalidArgument, "ragged matrix literal");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_));
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }

  DenseMatrix submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    DenseMatrix m(rs.size(), cs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j) m(i, j) = (*this)(rs[i], cs[j]);
    return m;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::InvalidArgument, "matrix shape mismatch in product");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (detail::entry_is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::InvalidArgument, "matrix shape mismatch in sum");
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
    return a;
  }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail(ErrorKind::InvalidArgument, "matrix shape mismatch in difference");
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
    return a;
  }
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!detail::entry_is_zero(x)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> a_;
};

namespace detail {

inline Integer exact_quotient(const Integer& a, const Integer& b) {
  Integer q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline Rational exact_quotient(const Rational& a, const Rational& b) { return a / b; }
template <class R>
Polynomial<R> exact_quotient(const Polynomial<R>& a, const Polynomial<R>& b) {
  return exact_div(a, b);
}

}  // namespace detail

/// Fraction-free (Bareiss) row echelon form, in place. Returns the pivot
/// columns and the permutation sign. Entries of the result are minors of the
/// input, so over Z and Q[z] every division is exact.
template <class T>
std::pair<std::vector<std::size_t>, int> bareiss_echelon(DenseMatrix<T>& m) {
  std::vector<std::size_t> pivots;
  int sign = 1;
  T prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      m.swap_rows(p, r);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      for (std::size_t j = c + 1; j < m.cols(); ++j)
        m(i, j) = detail::exact_quotient(m(r, c) * m(i, j) - m(i, c) * m(r, j), prev);
      m(i, c) = T(0);
    }
    prev = m(r, c);
    pivots.push_back(c);
    ++r;
  }
  return {pivots, sign};
}

template <class T>
std::size_t rank(DenseMatrix<T> m) {
  return bareiss_echelon(m).first.size();
}

template <class T>
T determinant(DenseMatrix<T> m) {
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
  if (m.rows() == 0) return T(1);
  auto [pivots, sign] = bareiss_echelon(m);
  if (pivots.size() < m.rows()) return T(0);
  T d = m(m.rows() - 1, m.cols() - 1);
  return sign < 0 ? T(0) - d : d;
}

/// Clears denominators of a rational vector and divides out the content,
/// giving a primitive integer vector on the same line.
inline std::vector<Integer> primitive_integer_vector(const std::vector<Rational>& v) {
  Integer l = 1, g = 0;
  for (const auto& c : v)
    if (!c.is_zero()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
  std::vector<Integer> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[k] = v[k].num() * (l / v[k].den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[k].get_mpz_t());
  }
  if (g > 1)
    for (auto& x : out) x = detail::exact_quotient(x, g);
  return out;
}

/// Exact right kernel of a rational matrix: rows are scaled to integers,
/// reduced fraction-free, and the kernel basis (one vector per free column)
/// is returned as primitive integer vectors.
inline std::vector<std::vector<Integer>> integer_kernel(const DenseMatrix<Rational>& a) {
  DenseMatrix<Integer> m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto iv = primitive_integer_vector(a.row(i));
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = iv[j];
  }
  auto [pivots, sign] = bareiss_echelon(m);
  (void)sign;
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Integer>> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(a.cols(), Rational(0));
    x[f] = Rational(1);
    for (std::size_t r = pivots.size(); r-- > 0;) {
      std::size_t pc = pivots[r];
      Rational acc(0);
      for (std::size_t j = pc + 1; j < a.cols(); ++j)
        if (!x[j].is_zero() && m(r, j) != 0) acc += Rational(m(r, j)) * x[j];
      x[pc] = -acc / Rational(m(r, pc));
    }
    basis.push_back(primitive_integer_vector(x));
  }
  return basis;
}

/// LLL reduction (delta = 3/4) of linearly independent integer vectors, exact
/// Gram-Schmidt over Q. Meant for the handful of kernel vectors met here.
inline std::vector<std::vector<Integer>> lll_reduce(std::vector<std::vector<Integer>> b) {
  const std::size_t k = b.size();
  if (k <= 1) return b;
  const std::size_t n = b[0].size();
  auto dot = [n](const auto& x, const auto& y) {
    Rational s(0);
    for (std::size_t t = 0; t < n; ++t) s += Rational(x[t]) * Rational(y[t]);
    return s;
  };
  std::vector<std::vector<Rational>> bs(k, std::vector<Rational>(n));
  std::vector<std::vector<Rational>> mu(k, std::vector<Rational>(k, Rational(0)));
  std::vector<Rational> bn(k);
  auto gram_schmidt = [&]() {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t t = 0; t < n; ++t) bs[i][t] = Rational(b[i][t]);
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = dot(b[i], bs[j]) / bn[j];
        for (std::size_t t = 0; t < n; ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      bn[i] = dot(bs[i], bs[i]);
    }
  };
  auto round_nearest = [](const Rational& q) {
    Integer two_num = 2 * q.num() + q.den();
    Integer d = 2 * q.den();
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), two_num.get_mpz_t(), d.get_mpz_t());
    return r;
  };
  gram_schmidt();
  const Rational delta(Integer(3), Integer(4));
  std::size_t i = 1;
  while (i < k) {
    for (std::size_t j = i; j-- > 0;) {
      Integer q = round_nearest(mu[i][j]);
      if (q != 0) {
        for (std::size_t t = 0; t < n; ++t) b[i][t] -= q * b[j][t];
        gram_schmidt();
      }
    }
    if (bn[i] >= (delta - mu[i][i - 1] * mu[i][i - 1]) * bn[i - 1]) {
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      gram_schmidt();
      i = std::max<std::size_t>(i - 1, 1);
    }
  }
  return b;
}

}  // namespace horolab
