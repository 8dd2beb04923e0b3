#pragma once

#include <string>
#include <utility>

#include "horolab/exact/polynomial.hpp"

namespace horolab {

/// Element of Q(z) kept as num/den with den monic and gcd(num, den) = 1.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Rational(1)) {}
  RationalFunction(const QPoly& p) : num_(p), den_(Rational(1)) {}  // NOLINT
  RationalFunction(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT
  template <std::integral T>
  RationalFunction(T c) : RationalFunction(Rational(c)) {}  // NOLINT
  RationalFunction(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) fail(ErrorKind::InvalidArgument, "rational function with zero denominator");
    normalize();
  }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  bool has_pole_at(const Rational& q) const { return den_(q).is_zero(); }

  Rational operator()(const Rational& q) const {
    if (has_pole_at(q)) fail(ErrorKind::Singularity, "rational function has a pole at " + q.str());
    return num_(q) / den_(q);
  }

  template <class T, class Convert>
  T evaluate(const T& x, Convert&& conv) const {
    return num_.evaluate(x, conv) / den_.evaluate(x, conv);
  }

  RationalFunction operator-() const { return RationalFunction(-num_, den_, Normalized{}); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return a + (-b);
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) fail(ErrorKind::InvalidArgument, "division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction derivative() const {
    return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  /// Order of the pole at infinity of f(z) dz: deg(num) - deg(den) + 2 if positive.
  int pole_order_at_infinity_of_form() const {
    if (num_.is_zero()) return 0;
    return std::max(0, num_.degree() - den_.degree() + 2);
  }

  std::string str() const {
    if (den_.degree() == 0) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

 private:
  struct Normalized {};
  RationalFunction(QPoly num, QPoly den, Normalized) : num_(std::move(num)), den_(std::move(den)) {}

  void normalize() {
    if (num_.is_zero()) {
      den_ = QPoly(Rational(1));
      return;
    }
    QPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
    Rational lead = den_.leading();
    if (lead != Rational(1)) {
      num_ = (Rational(1) / lead) * num_;
      den_ = (Rational(1) / lead) * den_;
    }
  }

  QPoly num_;
  QPoly den_;
};

inline bool is_zero(const RationalFunction& f) { return f.is_zero(); }

}  // namespace horolab
