#include <doctest.h>

#include <cmath>

#include "heis/expr.hpp"
#include "helpers.hpp"

using namespace heis;

namespace {
const std::vector<std::string> uv = {"u1", "u2"};
}

TEST_CASE("parse and evaluate") {
  CHECK(parse("u1^2 + u2^2", uv).eval({3, 4}) == doctest::Approx(25.0));
  CHECK(parse("2+3*4^2", uv).eval({0, 0}) == doctest::Approx(50.0));
  CHECK(parse("(2+3)*4", uv).eval({0, 0}) == doctest::Approx(20.0));
  CHECK(parse("2/4/2", uv).eval({0, 0}) == doctest::Approx(0.25));
  CHECK(parse("-u1^2", uv).eval({3, 0}) == doctest::Approx(-9.0));
  CHECK(parse("u1^-2", uv).eval({2, 0}) == doctest::Approx(0.25));
  CHECK(parse("sqrt(u1^2+u2^2)", uv).eval({3, 4}) == doctest::Approx(5.0));
  CHECK(parse("sin(u1)*cos(u2)+exp(u1)*log(u2)", uv).eval({0.3, 1.7}) ==
        doctest::Approx(std::sin(0.3) * std::cos(1.7) + std::exp(0.3) * std::log(1.7)));
  CHECK(parse("1e-3 + 2.5e2", uv).eval({0, 0}) == doctest::Approx(250.001));
  CHECK(parse(" ( -u1 ) * ( u2 - 1 ) ", uv).eval({2, 3}) == doctest::Approx(-4.0));
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(parse("u1*(", uv), SyntaxError);
  try {
    parse("u1*(", uv);
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 4);
  }
  CHECK_THROWS_AS(parse("u1 +", uv), SyntaxError);
  CHECK_THROWS_AS(parse("u3", uv), SyntaxError);      // unknown identifier
  CHECK_THROWS_AS(parse("foo(u1)", uv), SyntaxError); // unknown function
  CHECK_THROWS_AS(parse("u1 u2", uv), SyntaxError);   // trailing input
  CHECK_THROWS_AS(parse("u1^u2", uv), SyntaxError);   // non-integer exponent
  CHECK_THROWS_AS(parse("", uv), SyntaxError);
}

TEST_CASE("evaluation guards") {
  CHECK_THROWS_AS(parse("1/u1", uv).eval({0, 0}), DomainError);
  CHECK_THROWS_AS(parse("log(u1)", uv).eval({0, 0}), DomainError);
  CHECK_THROWS_AS(parse("log(u1)", uv).eval({-1, 0}), DomainError);
  CHECK_THROWS_AS(parse("sqrt(u1)", uv).eval({-1, 0}), DomainError);
  CHECK_THROWS_AS(parse("u1^-1", uv).eval({0, 0}), DomainError);
}

TEST_CASE("symbolic derivative of the paraboloid component") {
  Expr e = parse("(u1^2+u2^2)/2", uv);
  Expr d = e.diff(0);
  test::Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    CHECK(d.eval({a, b}) == doctest::Approx(a).epsilon(1e-14));
  }
}

TEST_CASE("symbolic derivatives match central differences") {
  const std::vector<std::string> battery = {
      "sin(u1)*cos(u2)",
      "exp(u1/(1+u2^2))",
      "log(1+u1^2+u2^2)",
      "sqrt(1+u1^2+u2^2)",
      "(u1-u2)^3 + u1*u2",
      "u1/(2+sin(u2))",
      "cos(u1*u2)^2",
  };
  test::Rng rng(42);
  const double h = 1e-5;
  for (const auto& text : battery) {
    Expr e = parse(text, uv);
    for (int var = 0; var < 2; ++var) {
      Expr d = e.diff(var);
      for (int i = 0; i < 25; ++i) {
        std::vector<double> u = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        std::vector<double> up = u, um = u;
        up[static_cast<std::size_t>(var)] += h;
        um[static_cast<std::size_t>(var)] -= h;
        double fd = (e.eval(up) - e.eval(um)) / (2 * h);
        double sym = d.eval(u);
        CHECK(std::abs(sym - fd) < 1e-6 * std::max(1.0, std::abs(sym)));
      }
    }
  }
}

TEST_CASE("substitute rebinds variables") {
  Expr e = parse("u1^2 + u2", uv);
  Expr bound = e.substitute(1, Expr::constant(3.0));
  CHECK(bound.eval({2.0}) == doctest::Approx(7.0));
  Expr swapped = e.substitute(1, Expr::variable(0));
  CHECK(swapped.eval({2.0}) == doctest::Approx(6.0));
  CHECK(e.min_arity() == 2);
  CHECK(bound.min_arity() == 1);
}
