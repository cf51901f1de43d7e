#pragma once

#include <memory>
#include <string>
#include <vector>

#include "heis/common.hpp"

namespace heis {

struct SyntaxError : Error {
  std::size_t offset;
  SyntaxError(const std::string& msg, std::size_t off)
      : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

// Immutable expression tree over indexed variables, closed under symbolic
// partial differentiation. Evaluation guards division, log and sqrt.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double v);
  static Expr variable(int index);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  Expr pow(int exponent) const;
  static Expr sqrt(const Expr& a);
  static Expr sin(const Expr& a);
  static Expr cos(const Expr& a);
  static Expr exp(const Expr& a);
  static Expr log(const Expr& a);

  double eval(const std::vector<double>& values) const;
  Expr diff(int var) const;
  Expr substitute(int var, const Expr& replacement) const;

  // Largest variable index used, plus one (0 for constants).
  int min_arity() const;

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend Expr parse(const std::string& text, const std::vector<std::string>& vars);
  std::shared_ptr<const Node> node_;
};

// Recursive-descent parser for
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := number | ident | func '(' expr ')' | '(' expr ')'
// with funcs sqrt, sin, cos, exp, log. Identifiers must appear in vars;
// their position in vars is the variable index.
Expr parse(const std::string& text, const std::vector<std::string>& vars);

}  // namespace heis
