#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "horolab/exact/rational_function.hpp"

namespace horolab {

struct Expr {
  enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Log };
  Kind kind = Kind::Number;
  Integer number = 0;       // Number
  std::string name;         // Variable
  int exponent = 0;         // Pow (right operand is always an integer literal)
  std::vector<std::shared_ptr<const Expr>> kids;

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.number != b.number || a.name != b.name || a.exponent != b.exponent ||
        a.kids.size() != b.kids.size())
      return false;
    for (std::size_t k = 0; k < a.kids.size(); ++k)
      if (!(*a.kids[k] == *b.kids[k])) return false;
    return true;
  }
};
using ExprPtr = std::shared_ptr<const Expr>;

/// Recursive-descent parser. Variables are z and x; anything else must be a
/// declared parameter. Precedence: ^ above unary minus above * / above + -.
class ExpressionParser {
 public:
  explicit ExpressionParser(std::set<std::string> parameters = {}) : params_(std::move(parameters)) {}

  ExprPtr parse(const std::string& text) {
    s_ = text;
    pos_ = 0;
    auto e = sum();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
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
  static ExprPtr node(Expr::Kind k, std::vector<ExprPtr> kids) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->kids = std::move(kids);
    return e;
  }

  ExprPtr sum() {
    auto lhs = product();
    for (;;) {
      if (eat('+')) lhs = node(Expr::Kind::Add, {lhs, product()});
      else if (eat('-')) lhs = node(Expr::Kind::Sub, {lhs, product()});
      else return lhs;
    }
  }
  ExprPtr product() {
    auto lhs = unary();
    for (;;) {
      if (eat('*')) lhs = node(Expr::Kind::Mul, {lhs, unary()});
      else if (eat('/')) lhs = node(Expr::Kind::Div, {lhs, unary()});
      else return lhs;
    }
  }
  ExprPtr unary() {
    if (eat('-')) return node(Expr::Kind::Neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }
  ExprPtr power() {
    auto base = atom();
    if (!eat('^')) return base;
    skip();
    bool neg = eat('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("exponent must be an integer literal");
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Pow;
    e->exponent = std::stoi(s_.substr(start, pos_ - start)) * (neg ? -1 : 1);
    e->kids = {base};
    return e;
  }
  ExprPtr atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = sum();
      if (!eat(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Number;
      e->number = Integer(s_.substr(start, pos_ - start));
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "log") {
        if (!eat('(')) error("expected '(' after log");
        auto arg = sum();
        if (!eat(')')) error("expected ')'");
        return node(Expr::Kind::Log, {arg});
      }
      if (id != "z" && id != "x" && !params_.count(id)) {
        pos_ = start;
        error("undeclared symbol '" + id + "'");
      }
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Variable;
      e->name = id;
      return e;
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::set<std::string> params_;
  std::string s_;
  std::size_t pos_ = 0;
};

inline ExprPtr parse_expression(const std::string& text, std::set<std::string> parameters = {}) {
  return ExpressionParser(std::move(parameters)).parse(text);
}

/// Fully parenthesized text form; parses back to an equal tree.
inline std::string unparse(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number: return e.number.get_str();
    case K::Variable: return e.name;
    case K::Add: return "(" + unparse(*e.kids[0]) + " + " + unparse(*e.kids[1]) + ")";
    case K::Sub: return "(" + unparse(*e.kids[0]) + " - " + unparse(*e.kids[1]) + ")";
    case K::Mul: return "(" + unparse(*e.kids[0]) + " * " + unparse(*e.kids[1]) + ")";
    case K::Div: return "(" + unparse(*e.kids[0]) + " / " + unparse(*e.kids[1]) + ")";
    case K::Pow:
      return "(" + unparse(*e.kids[0]) + "^" + (e.exponent < 0 ? "-" : "") + std::to_string(std::abs(e.exponent)) + ")";
    case K::Neg: return "(-" + unparse(*e.kids[0]) + ")";
    case K::Log: return "log(" + unparse(*e.kids[0]) + ")";
  }
  return "";
}

/// Evaluates a tree in any field-like type T; leaves are supplied by `leaf`
/// (for variables) and numbers go through T(Rational).
template <class T, class Leaf>
T evaluate_expression(const Expr& e, Leaf&& leaf) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number: return T(Rational(e.number));
    case K::Variable: return leaf(e.name);
    case K::Add: return evaluate_expression<T>(*e.kids[0], leaf) + evaluate_expression<T>(*e.kids[1], leaf);
    case K::Sub: return evaluate_expression<T>(*e.kids[0], leaf) - evaluate_expression<T>(*e.kids[1], leaf);
    case K::Mul: return evaluate_expression<T>(*e.kids[0], leaf) * evaluate_expression<T>(*e.kids[1], leaf);
    case K::Div: {
      T d = evaluate_expression<T>(*e.kids[1], leaf);
      if (is_zero(d)) fail(ErrorKind::InvalidArgument, "division by an identically zero expression");
      return evaluate_expression<T>(*e.kids[0], leaf) / d;
    }
    case K::Pow: {
      T b = evaluate_expression<T>(*e.kids[0], leaf);
      T acc = T(Rational(1));
      for (int k = 0; k < std::abs(e.exponent); ++k) acc = acc * b;
      if (e.exponent < 0) {
        if (is_zero(acc)) fail(ErrorKind::InvalidArgument, "negative power of zero");
        acc = T(Rational(1)) / acc;
      }
      return acc;
    }
    case K::Neg: return T(Rational(0)) - evaluate_expression<T>(*e.kids[0], leaf);
    case K::Log: fail(ErrorKind::SymbolicDomain, "log is not a rational function of z");
  }
  fail(ErrorKind::InvalidArgument, "bad expression node");
}

/// Element of Q(z); parameters are substituted by the given rational values.
inline RationalFunction to_rational_function(const Expr& e, const std::map<std::string, Rational>& values = {}) {
  return evaluate_expression<RationalFunction>(e, [&](const std::string& name) -> RationalFunction {
    if (name == "z") return RationalFunction(QPoly::variable());
    auto it = values.find(name);
    if (it == values.end()) fail(ErrorKind::SymbolicDomain, "no value for symbol '" + name + "'");
    return RationalFunction(it->second);
  });
}

inline RationalFunction parse_rational_function(const std::string& text,
                                                const std::map<std::string, Rational>& values = {}) {
  std::set<std::string> names;
  for (const auto& [k, v] : values) names.insert(k);
  return to_rational_function(*parse_expression(text, names), values);
}

}  // namespace horolab
