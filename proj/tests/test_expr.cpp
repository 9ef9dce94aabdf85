#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nlfi/expr.hpp"

using namespace nlfi;
using doctest::Approx;

TEST_CASE("parse and evaluate") {
  CHECK(Expression::parse("(2*x + x^2)/6").eval(1.0) == Approx(0.5).epsilon(1e-15));
  CHECK(Expression::parse("x").eval(0.3) == 0.3);
  CHECK(Expression::parse("floor(sqrt(10*x))").eval(0.5) == 2.0);
  CHECK(Expression::parse("(2*x + x^2)/6").eval(0.5) == Approx(5.0 / 24.0).epsilon(1e-15));
  CHECK(Expression::parse("(1 + sqrt(2)*sin(pi*x/4))/2").eval(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(Expression::parse("-2^2").eval(0.0) == -4.0);
  CHECK(Expression::parse("2^3^2").eval(0.0) == 512.0);
  CHECK(Expression::parse("1e-3 * 2").eval(0.0) == Approx(2e-3));
  CHECK(Expression::parse("x*y + eps").eval(Bindings{2.0, 3.0, 0.5}) == 6.5);
}

TEST_CASE("unused eps does not change the value") {
  const auto e = Expression::parse("sin(x) + x^2");
  for (double eps : {-0.5, 0.0, 0.25, 7.0}) CHECK(e.eval(0.7, eps) == e.eval(0.7, 0.0));
  CHECK_FALSE(e.depends_on(Var::eps));
  CHECK(Expression::parse("eps*x").depends_on(Var::eps));
}

TEST_CASE("parse errors carry an offset") {
  try {
    Expression::parse("2*x +");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(Expression::parse("2*(x+1"), ParseError);
  CHECK_THROWS_AS(Expression::parse("x x"), ParseError);
  try {
    Expression::parse("1 + foo(x)");
    FAIL("expected UnknownIdentifierError");
  } catch (const UnknownIdentifierError& e) {
    CHECK(e.name() == "foo");
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(Expression::parse("sqrt(x)").eval(-1.0), DomainError);
  CHECK_THROWS_AS(Expression::parse("log(x)").eval(0.0), DomainError);
  CHECK_THROWS_AS(Expression::parse("arcsin(x)").eval(1.5), DomainError);
  CHECK_THROWS_AS(Expression::parse("1/x").eval(0.0), DomainError);
}

TEST_CASE("symbolic derivative") {
  const auto d = Expression::parse("(2*x + x^2)/6").differentiate(Var::x);
  CHECK(d.eval(0.0) == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(Expression::parse("3.5").differentiate(Var::x).eval(0.4) == 0.0);
  CHECK(Expression::parse("x*(x + 1)/4").differentiate(Var::x).eval(1.0) == Approx(0.75).epsilon(1e-15));

  const auto h2 = Expression::parse("(1 + sqrt(2)*sin(pi*x/4))/2");
  const double x = 0.37;
  CHECK(h2.differentiate(Var::x).eval(x) ==
        Approx(std::sqrt(2.0) * std::numbers::pi / 8.0 * std::cos(std::numbers::pi * x / 4.0)).epsilon(1e-14));
  CHECK(Expression::parse("x^x").differentiate(Var::x).eval(2.0) == Approx(4.0 * (std::log(2.0) + 1.0)));
  CHECK_THROWS_AS(Expression::parse("floor(x)").differentiate(Var::x), NonDifferentiableError);
  CHECK_THROWS_AS(Expression::parse("abs(x) + 1").differentiate(Var::x), NonDifferentiableError);
}

TEST_CASE("derivative agrees with central differences") {
  const char* exprs[] = {"exp(sin(x))*x^3", "arcsin(x/2) + log(1 + x^2)", "tan(x)/(1 + x)", "sqrt(1 + 16*x)"};
  for (const char* s : exprs) {
    const auto e = Expression::parse(s);
    const auto d = e.differentiate(Var::x);
    for (double x : {0.1, 0.45, 0.9}) {
      const double h = 1e-6;
      const double fd = (e.eval(x + h) - e.eval(x - h)) / (2.0 * h);
      CHECK(d.eval(x) == Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("to_string round trips") {
  for (const char* s : {"(2*x + x^2)/6", "-x^2 + eps*sin(pi*x)", "floor(sqrt(10*x))", "2^-3", "-(1-x)/5"}) {
    const auto e = Expression::parse(s);
    CHECK(Expression::parse(e.to_string()).structurally_equal(e));
  }
}

TEST_CASE("substitute and bind") {
  const auto e = Expression::parse("x^2 + eps");
  CHECK(e.bind(Var::eps, 0.5).eval(2.0, 100.0) == 4.5);
  CHECK(e.substitute(Var::x, Expression::parse("2*x")).eval(1.5) == 9.0);
}

TEST_CASE("monotonicity") {
  CHECK(check_monotone(Expression::parse("(2*x + x^2)/6"), {0, 1}) == Monotonicity::increasing);
  CHECK(check_monotone(Expression::parse("1 - x^3"), {0, 1}) == Monotonicity::decreasing);
  CHECK(check_monotone(Expression::parse("(x - 0.5)^2"), {0, 1}) == Monotonicity::none);
  CHECK(check_monotone(Expression::parse("0.3"), {0, 1}) == Monotonicity::none);
}

TEST_CASE("monotone inversion") {
  const auto h1 = Expression::parse("(2*x + x^2)/6");
  CHECK(invert_monotone(h1, 0.5, {0, 1}) == Approx(1.0).epsilon(1e-12));
  CHECK(invert_monotone(Expression::parse("x"), 0.7, {0, 1}) == Approx(0.7).epsilon(1e-12));
  const auto h2 = Expression::parse("(1 + sqrt(2)*sin(pi*x/4))/2");
  const double closed = 4.0 / std::numbers::pi * std::asin((2.0 * 0.75 - 1.0) / std::sqrt(2.0));
  CHECK(std::abs(invert_monotone(h2, 0.75, {0, 1}) - closed) < 1e-10);
  const auto dec = Expression::parse("1 - x/2");
  CHECK(invert_monotone(dec, 0.8, {0, 1}) == Approx(0.4).epsilon(1e-12));
  CHECK_THROWS_AS(invert_monotone(h1, 0.9, {0, 1}), InversionError);
  CHECK_THROWS_AS(invert_monotone(Expression::parse("(x - 0.5)^2"), 0.1, {0, 1}), InversionError);
}
