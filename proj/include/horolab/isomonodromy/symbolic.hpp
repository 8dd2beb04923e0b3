#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "horolab/exact/matrix.hpp"
#include "horolab/exact/rational.hpp"
#include "horolab/io/expression.hpp"

namespace horolab {

/// Exact expressions num / (z^i (z-1)^j x^k) where num is a polynomial in z,
/// x, L = log x and declared parameters, with d/dx L = 1/x. Kept reduced:
/// no factor z, z - 1 or x of num is left against the denominator, so zero
/// has a unique representation.
class SymExpr {
 public:
  using Monomial = std::map<std::string, int>;  // variable -> positive exponent
  using Poly = std::map<Monomial, Rational>;

  SymExpr() = default;
  SymExpr(const Rational& c) {
    if (!c.is_zero()) num_[{}] = c;
  }
  template <std::integral T>
  SymExpr(T c) : SymExpr(Rational(c)) {}

  static SymExpr variable(const std::string& name) {
    SymExpr e;
    e.num_[{{name, 1}}] = Rational(1);
    return e;
  }
  static SymExpr z() { return variable("z"); }
  static SymExpr x() { return variable("x"); }
  static SymExpr log_x() { return variable("L"); }
  /// z^i (z-1)^j x^k for integer (possibly negative) exponents.
  static SymExpr power_product(int i, int j, int k) {
    SymExpr e(1);
    e.shift(i, j, k);
    e.normalize();
    return e;
  }

  bool is_zero() const { return num_.empty(); }
  const Poly& numerator() const { return num_; }
  int z_order() const { return dz_; }
  int z1_order() const { return dz1_; }
  int x_order() const { return dx_; }

  /// Non-zero rational constant value, if the expression is one.
  std::optional<Rational> constant() const {
    if (dz_ || dz1_ || dx_) return std::nullopt;
    if (num_.empty()) return Rational(0);
    if (num_.size() == 1 && num_.begin()->first.empty()) return num_.begin()->second;
    return std::nullopt;
  }

  friend SymExpr operator+(const SymExpr& a, const SymExpr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int i = std::max(a.dz_, b.dz_), j = std::max(a.dz1_, b.dz1_), k = std::max(a.dx_, b.dx_);
    SymExpr out;
    out.num_ = add(lift(a, i, j, k), lift(b, i, j, k));
    out.dz_ = i;
    out.dz1_ = j;
    out.dx_ = k;
    out.normalize();
    return out;
  }
  friend SymExpr operator-(const SymExpr& a) {
    SymExpr out = a;
    for (auto& [m, c] : out.num_) c = -c;
    return out;
  }
  friend SymExpr operator-(const SymExpr& a, const SymExpr& b) { return a + (-b); }
  friend SymExpr operator*(const SymExpr& a, const SymExpr& b) {
    SymExpr out;
    out.num_ = mul(a.num_, b.num_);
    out.dz_ = a.dz_ + b.dz_;
    out.dz1_ = a.dz1_ + b.dz1_;
    out.dx_ = a.dx_ + b.dx_;
    out.normalize();
    return out;
  }
  friend bool operator==(const SymExpr& a, const SymExpr& b) { return (a - b).is_zero(); }
  SymExpr& operator+=(const SymExpr& o) { return *this = *this + o; }
  SymExpr& operator-=(const SymExpr& o) { return *this = *this - o; }

  /// Division by expressions whose numerator is c z^i (z-1)^j x^k.
  friend SymExpr operator/(const SymExpr& a, const SymExpr& b) {
    if (b.is_zero()) fail(ErrorKind::SymbolicDomain, "division by zero");
    SymExpr d = b;
    int i = 0, j = 0, k = 0;
    while (d.divides_by("z")) ++i;
    while (d.divides_by_z_minus_1()) ++j;
    while (d.divides_by("x")) ++k;
    if (d.num_.size() != 1 || !d.num_.begin()->first.empty())
      fail(ErrorKind::SymbolicDomain, "denominator " + b.str() + " is not a product of powers of z, z - 1 and x");
    SymExpr out = a * SymExpr(Rational(1) / d.num_.begin()->second);
    out.shift(d.dz_ - i, d.dz1_ - j, d.dx_ - k);
    out.normalize();
    return out;
  }

  SymExpr diff_z() const {
    // d/dz (n / (z^i (z-1)^j)) = (n_z z (z-1) - n (i (z-1) + j z)) / (z^{i+1} (z-1)^{j+1})
    const Poly nz = partial(num_, "z");
    SymExpr zz = z(), z1 = z() - SymExpr(1);
    SymExpr t = from(nz) * zz * z1 - from(num_) * (SymExpr(dz_) * z1 + SymExpr(dz1_) * zz);
    t.shift(-(dz_ + 1), -(dz1_ + 1), -dx_);
    t.normalize();
    return t;
  }

  SymExpr diff_x() const {
    // d/dx (n / x^k) = (x n_x + n_L - k n) / x^{k+1}
    SymExpr t = from(partial(num_, "x")) * x() + from(partial(num_, "L")) - SymExpr(dx_) * from(num_);
    t.shift(-dz_, -dz1_, -(dx_ + 1));
    t.normalize();
    return t;
  }

  /// Replaces named variables by rational values (L is substituted
  /// independently of x).
  SymExpr substitute(const std::map<std::string, Rational>& values) const {
    SymExpr acc;
    for (const auto& [m, c] : num_) {
      SymExpr term(c);
      for (const auto& [v, e] : m) {
        auto it = values.find(v);
        SymExpr base = it != values.end() ? SymExpr(it->second) : variable(v);
        for (int t = 0; t < e; ++t) term = term * base;
      }
      acc = acc + term;
    }
    SymExpr den(1);
    if (auto it = values.find("z"); it != values.end()) {
      const Rational zv = it->second, z1v = zv - Rational(1);
      if ((dz_ && zv.is_zero()) || (dz1_ && z1v.is_zero())) fail(ErrorKind::Singularity, "z is a pole");
      if (dz_) den = den * SymExpr(pow(Rational(1) / zv, static_cast<unsigned long>(dz_)));
      if (dz1_) den = den * SymExpr(pow(Rational(1) / z1v, static_cast<unsigned long>(dz1_)));
    } else {
      den = den * power_product(-dz_, -dz1_, 0);
    }
    if (auto it = values.find("x"); it != values.end()) {
      if (dx_ && it->second.is_zero()) fail(ErrorKind::Singularity, "x = 0 is a pole");
      if (dx_) den = den * SymExpr(pow(Rational(1) / it->second, static_cast<unsigned long>(dx_)));
    } else {
      den = den * power_product(0, 0, -dx_);
    }
    return acc * den;
  }

  /// Evaluates with a numeric type T (complex or real), variables from `leaf`.
  template <class T, class Leaf>
  T evaluate(Leaf&& leaf) const {
    T acc = T(0);
    for (const auto& [m, c] : num_) {
      T term;
      if constexpr (std::is_constructible_v<T, std::string>) term = T(c.num().get_str()) / T(c.den().get_str());
      else term = T(c.to_double());
      for (const auto& [v, e] : m) {
        T b = leaf(v);
        for (int t = 0; t < e; ++t) term *= b;
      }
      acc += term;
    }
    T zz = leaf("z"), xx = leaf("x");
    for (int t = 0; t < dz_; ++t) acc /= zz;
    for (int t = 0; t < dz1_; ++t) acc /= (zz - T(1));
    for (int t = 0; t < dx_; ++t) acc /= xx;
    return acc;
  }

  /// Variables occurring in the numerator (plus z, x from the denominator).
  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& [m, c] : num_)
      for (const auto& [v, e] : m) out.insert(v);
    if (dz_ || dz1_) out.insert("z");
    if (dx_) out.insert("x");
    return out;
  }

  std::string str() const {
    if (num_.empty()) return "0";
    std::string s;
    for (auto it = num_.rbegin(); it != num_.rend(); ++it) {
      const auto& [m, c] = *it;
      std::string mono;
      for (const auto& [v, e] : m) {
        if (!mono.empty()) mono += "*";
        mono += v == "L" ? "log(x)" : v;
        if (e > 1) mono += "^" + std::to_string(e);
      }
      Rational a = abs(c);
      std::string term = mono.empty() ? a.str() : (a == Rational(1) ? mono : a.str() + "*" + mono);
      if (s.empty()) s = c.sign() < 0 ? "-" + term : term;
      else s += (c.sign() < 0 ? " - " : " + ") + term;
    }
    std::string den;
    auto part = [&](const std::string& b, int e) {
      if (e == 0) return;
      if (!den.empty()) den += "*";
      den += b + (e > 1 ? "^" + std::to_string(e) : "");
    };
    part("z", dz_);
    part("(z - 1)", dz1_);
    part("x", dx_);
    if (den.empty()) return s;
    return "(" + s + ")/(" + den + ")";
  }

 private:
  static SymExpr from(const Poly& p) {
    SymExpr e;
    e.num_ = p;
    return e;
  }

  static Poly add(Poly a, const Poly& b) {
    for (const auto& [m, c] : b) {
      auto& slot = a[m];
      slot = slot + c;
      if (slot.is_zero()) a.erase(m);
    }
    return a;
  }
  static Poly mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) {
        Monomial m = ma;
        for (const auto& [v, e] : mb) m[v] += e;
        auto& slot = out[m];
        slot = slot + ca * cb;
        if (slot.is_zero()) out.erase(m);
      }
    return out;
  }
  static Poly partial(const Poly& p, const std::string& v) {
    Poly out;
    for (const auto& [m, c] : p) {
      auto it = m.find(v);
      if (it == m.end()) continue;
      Monomial d = m;
      Rational f = c * Rational(it->second);
      if (--d[v] == 0) d.erase(v);
      out[d] = out[d] + f;
    }
    return out;
  }
  static Poly z_minus_1_power(int e) {
    Poly out{{{}, Rational(1)}};
    const Poly f{{{{"z", 1}}, Rational(1)}, {{}, Rational(-1)}};
    for (int t = 0; t < e; ++t) out = mul(out, f);
    return out;
  }
  // numerator of a over the denominator z^i (z-1)^j x^k
  static Poly lift(const SymExpr& a, int i, int j, int k) {
    Poly p = mul(a.num_, z_minus_1_power(j - a.dz1_));
    Poly out;
    for (const auto& [m, c] : p) {
      Monomial n = m;
      if (i > a.dz_) n["z"] += i - a.dz_;
      if (k > a.dx_) n["x"] += k - a.dx_;
      out[n] = c;
    }
    return out;
  }

  // multiplies by z^i (z-1)^j x^k
  void shift(int i, int j, int k) {
    dz_ -= i;
    dz1_ -= j;
    dx_ -= k;
    if (dz_ < 0) {
      num_ = mul(num_, Poly{{{{"z", -dz_}}, Rational(1)}});
      dz_ = 0;
    }
    if (dz1_ < 0) {
      num_ = mul(num_, z_minus_1_power(-dz1_));
      dz1_ = 0;
    }
    if (dx_ < 0) {
      num_ = mul(num_, Poly{{{{"x", -dx_}}, Rational(1)}});
      dx_ = 0;
    }
  }

  bool divides_by(const std::string& v) {
    if (num_.empty()) return false;
    for (const auto& [m, c] : num_)
      if (!m.count(v)) return false;
    Poly out;
    for (const auto& [m, c] : num_) {
      Monomial d = m;
      if (--d[v] == 0) d.erase(v);
      out[d] = c;
    }
    num_ = std::move(out);
    return true;
  }

  // Synthetic division by (z - 1) when num vanishes at z = 1.
  bool divides_by_z_minus_1() {
    if (num_.empty()) return false;
    // group by the non-z part of the monomial
    std::map<Monomial, std::map<int, Rational>> groups;
    for (const auto& [m, c] : num_) {
      Monomial rest = m;
      int e = 0;
      if (auto it = rest.find("z"); it != rest.end()) {
        e = it->second;
        rest.erase(it);
      }
      groups[rest][e] = c;
    }
    Poly out;
    for (const auto& [rest, coeffs] : groups) {
      const int deg = coeffs.rbegin()->first;
      // q_{e-1} = sum_{f >= e} c_f, remainder sum of all c_f
      Rational run(0);
      std::vector<Rational> q(static_cast<std::size_t>(deg));
      for (int e = deg; e >= 1; --e) {
        auto it = coeffs.find(e);
        if (it != coeffs.end()) run = run + it->second;
        q[static_cast<std::size_t>(e - 1)] = run;
      }
      auto it0 = coeffs.find(0);
      if (!(run + (it0 != coeffs.end() ? it0->second : Rational(0))).is_zero()) return false;
      for (int e = 0; e < deg; ++e) {
        if (q[static_cast<std::size_t>(e)].is_zero()) continue;
        Monomial m = rest;
        if (e > 0) m["z"] = e;
        out[m] = q[static_cast<std::size_t>(e)];
      }
    }
    num_ = std::move(out);
    return true;
  }

  void normalize() {
    if (num_.empty()) {
      dz_ = dz1_ = dx_ = 0;
      return;
    }
    while (dz_ > 0 && divides_by("z")) --dz_;
    while (dz1_ > 0 && divides_by_z_minus_1()) --dz1_;
    while (dx_ > 0 && divides_by("x")) --dx_;
  }

  Poly num_;
  int dz_ = 0, dz1_ = 0, dx_ = 0;
};

inline bool is_zero(const SymExpr& e) { return e.is_zero(); }

using SymMatrix = DenseMatrix<SymExpr>;

template <class F>
SymMatrix sym_map(const SymMatrix& a, F&& f) {
  SymMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = f(a(i, j));
  return c;
}

inline SymMatrix operator*(const SymExpr& s, const SymMatrix& a) {
  return sym_map(a, [&](const SymExpr& e) { return s * e; });
}

/// Converts a parsed expression; log is allowed only as log(x).
inline SymExpr to_sym(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number: return SymExpr(Rational(e.number));
    case Expr::Kind::Variable: return SymExpr::variable(e.name);
    case Expr::Kind::Add: return to_sym(*e.kids[0]) + to_sym(*e.kids[1]);
    case Expr::Kind::Sub: return to_sym(*e.kids[0]) - to_sym(*e.kids[1]);
    case Expr::Kind::Mul: return to_sym(*e.kids[0]) * to_sym(*e.kids[1]);
    case Expr::Kind::Div: return to_sym(*e.kids[0]) / to_sym(*e.kids[1]);
    case Expr::Kind::Neg: return -to_sym(*e.kids[0]);
    case Expr::Kind::Pow: {
      SymExpr b = to_sym(*e.kids[0]), r(1);
      for (int t = 0; t < std::abs(e.exponent); ++t) r = r * b;
      return e.exponent < 0 ? SymExpr(1) / r : r;
    }
    case Expr::Kind::Log: {
      const Expr& a = *e.kids[0];
      if (a.kind == Expr::Kind::Variable && a.name == "x") return SymExpr::log_x();
      fail(ErrorKind::SymbolicDomain, "only log(x) is supported, got log(" + unparse(a) + ")");
    }
  }
  fail(ErrorKind::SymbolicDomain, "unsupported expression");
}

inline SymExpr parse_sym(const std::string& text, const std::set<std::string>& params = {}) {
  return to_sym(*parse_expression(text, params));
}

}  // namespace horolab
