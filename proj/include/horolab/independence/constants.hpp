#pragma once

#include <cctype>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "horolab/error.hpp"

namespace horolab {

using BigFloat = boost::multiprecision::mpfr_float;

/// Sets the working precision (decimal digits) of BigFloat for a scope.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits) : saved_(BigFloat::default_precision()) {
    BigFloat::default_precision(digits);
  }
  ~PrecisionGuard() { BigFloat::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

/// Evaluates a real constant expression at the current BigFloat precision:
/// decimals, e, pi, + - * / ^, and sqrt, exp, log, sin, cos, atan.
class ConstantEvaluator {
 public:
  BigFloat operator()(const std::string& text) {
    s_ = text;
    pos_ = 0;
    BigFloat v = sum();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::SyntaxError, "at position " + std::to_string(pos_) + ": " + msg + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  BigFloat sum() {
    BigFloat v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  BigFloat product() {
    BigFloat v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) {
        BigFloat d = unary();
        if (d == 0) error("division by zero");
        v /= d;
      } else return v;
    }
  }
  BigFloat unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  BigFloat power() {
    BigFloat b = atom();
    if (eat('^')) return boost::multiprecision::pow(b, unary());
    return b;
  }
  BigFloat atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      BigFloat v = sum();
      if (!eat(')')) error("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
          (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '-' || s_[pos_ + 1] == '+')) {
        pos_ += 2;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      return BigFloat(s_.substr(start, pos_ - start));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "e") return boost::multiprecision::exp(BigFloat(1));
      if (id == "pi") return boost::math::constants::pi<BigFloat>();
      static const std::vector<std::pair<std::string, std::function<BigFloat(const BigFloat&)>>> fns = {
          {"sqrt", [](const BigFloat& v) { return BigFloat(boost::multiprecision::sqrt(v)); }},
          {"exp", [](const BigFloat& v) { return BigFloat(boost::multiprecision::exp(v)); }},
          {"log", [](const BigFloat& v) { return BigFloat(boost::multiprecision::log(v)); }},
          {"sin", [](const BigFloat& v) { return BigFloat(boost::multiprecision::sin(v)); }},
          {"cos", [](const BigFloat& v) { return BigFloat(boost::multiprecision::cos(v)); }},
          {"atan", [](const BigFloat& v) { return BigFloat(boost::multiprecision::atan(v)); }},
      };
      for (const auto& [name, fn] : fns)
        if (name == id) {
          if (!eat('(')) error("expected '(' after " + id);
          BigFloat arg = sum();
          if (!eat(')')) error("expected ')'");
          if ((id == "sqrt" && arg < 0) || (id == "log" && arg <= 0)) error(id + " of an out-of-domain argument");
          return fn(arg);
        }
      pos_ = start;
      error("unknown name '" + id + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

/// Values of the given constant expressions at `digits` decimal digits.
using ValueProvider = std::function<std::vector<BigFloat>(unsigned digits)>;

inline ValueProvider constant_values(std::vector<std::string> expressions) {
  return [expressions](unsigned digits) {
    PrecisionGuard guard(digits);
    std::vector<BigFloat> out;
    ConstantEvaluator ev;
    for (const auto& e : expressions) out.push_back(ev(e));
    return out;
  };
}

}  // namespace horolab
