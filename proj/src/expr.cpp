#include "heis/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace heis {

struct Expr::Node {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Sin, Cos, Exp, Log };
  Op op;
  double value = 0.0;
  int var = -1;
  int exponent = 0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expr::Node;
using Op = Node::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);

NodePtr add(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return make(Op::Neg, std::move(b));
  return make(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return make(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (b->op == Op::Const && b->value != 0.0) {
    if (a->op == Op::Const) return make_const(a->value / b->value);
    if (b->value == 1.0) return a;
  }
  if (is_const(a, 0.0) && !(b->op == Op::Const && b->value == 0.0)) return make_const(0.0);
  return make(Op::Div, std::move(a), std::move(b));
}

NodePtr int_pow(NodePtr a, int e) {
  if (e == 0) return make_const(1.0);
  if (e == 1) return a;
  if (a->op == Op::Const) return make_const(std::pow(a->value, e));
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->exponent = e;
  n->a = std::move(a);
  return n;
}

double eval_node(const Node& n, const std::vector<double>& v) {
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      if (n.var < 0 || static_cast<std::size_t>(n.var) >= v.size())
        throw DimensionError("expression: variable index out of range at evaluation");
      return v[static_cast<std::size_t>(n.var)];
    case Op::Add:
      return eval_node(*n.a, v) + eval_node(*n.b, v);
    case Op::Sub:
      return eval_node(*n.a, v) - eval_node(*n.b, v);
    case Op::Mul:
      return eval_node(*n.a, v) * eval_node(*n.b, v);
    case Op::Div: {
      double den = eval_node(*n.b, v);
      if (den == 0.0) throw DomainError("expression: division by zero");
      return eval_node(*n.a, v) / den;
    }
    case Op::Neg:
      return -eval_node(*n.a, v);
    case Op::Pow: {
      double base = eval_node(*n.a, v);
      if (base == 0.0 && n.exponent < 0) throw DomainError("expression: zero to a negative power");
      double r = 1.0;
      int e = std::abs(n.exponent);
      double acc = base;
      while (e > 0) {
        if (e & 1) r *= acc;
        acc *= acc;
        e >>= 1;
      }
      return n.exponent >= 0 ? r : 1.0 / r;
    }
    case Op::Sqrt: {
      double a = eval_node(*n.a, v);
      if (a < 0.0) throw DomainError("expression: sqrt of a negative value");
      return std::sqrt(a);
    }
    case Op::Sin:
      return std::sin(eval_node(*n.a, v));
    case Op::Cos:
      return std::cos(eval_node(*n.a, v));
    case Op::Exp:
      return std::exp(eval_node(*n.a, v));
    case Op::Log: {
      double a = eval_node(*n.a, v);
      if (a <= 0.0) throw DomainError("expression: log of a non-positive value");
      return std::log(a);
    }
  }
  throw InvariantError("expression: unreachable op");
}

NodePtr diff_node(const NodePtr& n, int var) {
  switch (n->op) {
    case Op::Const:
      return make_const(0.0);
    case Op::Var:
      return make_const(n->var == var ? 1.0 : 0.0);
    case Op::Add:
      return add(diff_node(n->a, var), diff_node(n->b, var));
    case Op::Sub:
      return sub(diff_node(n->a, var), diff_node(n->b, var));
    case Op::Mul:
      return add(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var)));
    case Op::Div:
      return div(sub(mul(diff_node(n->a, var), n->b), mul(n->a, diff_node(n->b, var))),
                 int_pow(n->b, 2));
    case Op::Neg:
      return make(Op::Neg, diff_node(n->a, var));
    case Op::Pow:
      return mul(mul(make_const(n->exponent), int_pow(n->a, n->exponent - 1)), diff_node(n->a, var));
    case Op::Sqrt:
      return div(diff_node(n->a, var), mul(make_const(2.0), make(Op::Sqrt, n->a)));
    case Op::Sin:
      return mul(make(Op::Cos, n->a), diff_node(n->a, var));
    case Op::Cos:
      return make(Op::Neg, mul(make(Op::Sin, n->a), diff_node(n->a, var)));
    case Op::Exp:
      return mul(make(Op::Exp, n->a), diff_node(n->a, var));
    case Op::Log:
      return div(diff_node(n->a, var), n->a);
  }
  throw InvariantError("expression: unreachable op");
}

NodePtr substitute_node(const NodePtr& n, int var, const NodePtr& repl) {
  switch (n->op) {
    case Op::Const:
      return n;
    case Op::Var:
      return n->var == var ? repl : n;
    case Op::Add:
      return add(substitute_node(n->a, var, repl), substitute_node(n->b, var, repl));
    case Op::Sub:
      return sub(substitute_node(n->a, var, repl), substitute_node(n->b, var, repl));
    case Op::Mul:
      return mul(substitute_node(n->a, var, repl), substitute_node(n->b, var, repl));
    case Op::Div:
      return div(substitute_node(n->a, var, repl), substitute_node(n->b, var, repl));
    case Op::Neg:
      return make(Op::Neg, substitute_node(n->a, var, repl));
    case Op::Pow:
      return int_pow(substitute_node(n->a, var, repl), n->exponent);
    default:
      return make(n->op, substitute_node(n->a, var, repl));
  }
}

int arity_node(const Node& n) {
  switch (n.op) {
    case Op::Const:
      return 0;
    case Op::Var:
      return n.var + 1;
    default: {
      int r = n.a ? arity_node(*n.a) : 0;
      if (n.b) r = std::max(r, arity_node(*n.b));
      return r;
    }
  }
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    bool neg = false;
    skip_ws();
    if (eat('-')) neg = true;
    NodePtr e = parse_term();
    if (neg) e = sub(make_const(0.0), e);
    for (;;) {
      if (eat('+'))
        e = add(e, parse_term());
      else if (eat('-'))
        e = sub(e, parse_term());
      else
        return e;
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_factor();
    for (;;) {
      if (eat('*'))
        e = mul(e, parse_factor());
      else if (eat('/'))
        e = div(e, parse_factor());
      else
        return e;
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_base();
    if (eat('^')) {
      skip_ws();
      std::size_t at = pos_;
      bool neg = false;
      if (pos_ < text_.size() && text_[pos_] == '-') {
        neg = true;
        ++pos_;
      }
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw SyntaxError("expected integer exponent", at);
      long e = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        e = e * 10 + (text_[pos_] - '0');
        if (e > 64) throw SyntaxError("exponent too large", at);
        ++pos_;
      }
      return int_pow(base, static_cast<int>(neg ? -e : e));
    }
    return base;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!eat(')')) throw SyntaxError("expected ')'", pos_);
      return e;
    }
    if (c == '-') {
      // unary minus inside parentheses, e.g. "(-u1)"
      ++pos_;
      return sub(make_const(0.0), parse_factor());
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) throw SyntaxError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - start);
    return make_const(v);
  }

  NodePtr parse_ident() {
    std::size_t at = pos_;
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      name += text_[pos_];
      ++pos_;
    }
    static const char* funcs[] = {"sqrt", "sin", "cos", "exp", "log"};
    static const Op func_ops[] = {Op::Sqrt, Op::Sin, Op::Cos, Op::Exp, Op::Log};
    for (int i = 0; i < 5; ++i) {
      if (name == funcs[i]) {
        if (!eat('(')) throw SyntaxError("expected '(' after function name", pos_);
        NodePtr arg = parse_expr();
        if (!eat(')')) throw SyntaxError("expected ')'", pos_);
        return make(func_ops[i], std::move(arg));
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (name == vars_[i]) {
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->var = static_cast<int>(i);
        return n;
      }
    }
    throw SyntaxError("unknown identifier '" + name + "'", at);
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::constant(double v) { return Expr(make_const(v)); }

Expr Expr::variable(int index) {
  if (index < 0) throw DimensionError("Expr::variable: negative index");
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = index;
  return Expr(n);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(div(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(sub(make_const(0.0), a.node_)); }

Expr Expr::pow(int exponent) const { return Expr(int_pow(node_, exponent)); }
Expr Expr::sqrt(const Expr& a) { return Expr(make(Op::Sqrt, a.node_)); }
Expr Expr::sin(const Expr& a) { return Expr(make(Op::Sin, a.node_)); }
Expr Expr::cos(const Expr& a) { return Expr(make(Op::Cos, a.node_)); }
Expr Expr::exp(const Expr& a) { return Expr(make(Op::Exp, a.node_)); }
Expr Expr::log(const Expr& a) { return Expr(make(Op::Log, a.node_)); }

double Expr::eval(const std::vector<double>& values) const { return eval_node(*node_, values); }

Expr Expr::diff(int var) const { return Expr(diff_node(node_, var)); }

Expr Expr::substitute(int var, const Expr& replacement) const {
  return Expr(substitute_node(node_, var, replacement.node_));
}

int Expr::min_arity() const { return arity_node(*node_); }

Expr parse(const std::string& text, const std::vector<std::string>& vars) {
  Parser p(text, vars);
  return Expr(p.run());
}

}  // namespace heis
