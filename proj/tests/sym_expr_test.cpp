#include <doctest.h>

#include <random>

#include "bundlecheck/sym/eval.hpp"
#include "bundlecheck/sym/parse.hpp"
#include "bundlecheck/sym/zerotest.hpp"
#include "testutil.hpp"

using namespace bundlecheck;
using sym::Expr;
using testutil::E;

TEST_SUITE("sym") {

TEST_CASE("normal form identities") {
  CHECK(E("x^0") == Expr(1));
  CHECK(E("x^1") == Expr::symbol("x"));
  CHECK(E("0*x + 1") == Expr(1));
  CHECK(E("1*x") == Expr::symbol("x"));
  CHECK(E("x + 0") == Expr::symbol("x"));
  CHECK(E("2 + 3") == Expr(5));
  CHECK(E("x + x") == E("2*x"));
  CHECK(E("x*x") == E("x^2"));
  CHECK(E("x*y - y*x").is_zero());
  CHECK(E("(x+y)^2") == E("x^2 + 2*x*y + y^2"));
  CHECK(E("x - x").is_zero());
  CHECK(E("2/4") == Expr::rational(1, 2));
}

TEST_CASE("factor order is canonical") {
  CHECK(E("a*b*c") == E("c*b*a"));
  CHECK(E("x2*x1 + x1*x2") == E("2*x1*x2"));
}

TEST_CASE("rational constants never keep a negative denominator") {
  CHECK(Expr::rational(1, -2) == Expr::rational(-1, 2));
  CHECK(Expr::rational(-1, -2) == Expr::rational(1, 2));
  CHECK(Expr::rational(3, -1) == Expr(-3));
  // inverse of a negative rational exercises the constant power fold
  CHECK(Expr::pow(Expr(-2), -1) == Expr::rational(-1, 2));
  CHECK(Expr::pow(Expr::rational(-2, 3), -2) == Expr::rational(9, 4));
  CHECK(Expr::pow(Expr::rational(-1, 1), -1) == Expr(-1));
  CHECK((Expr(1) / Expr(-4)) == Expr::rational(-1, 4));
}

TEST_CASE("sums of fractions over a common sum base reduce exactly") {
  // substitution output shaped like the curved metric transport
  CHECK(E("p*q^2/(1+q^2) + p/(1+q^2)") == Expr::symbol("p"));
  CHECK(E("(x^2 - 1)/(x + 1) - x + 1").is_zero());
  // inexact division is left alone
  Expr stuck = E("p*q/(1+q^2)");
  CHECK(stuck == stuck.normalized());
  CHECK(!stuck.is_zero());
  // three-way split with a shared quadratic denominator
  CHECK(E("x^2/(x+y) + 2*x*y/(x+y) + y^2/(x+y)") == E("x + y"));
}

TEST_CASE("parse print round trip") {
  const char* samples[] = {
      "x1^2 + x2^2",
      "f(x1^2+x2^2)*x1",
      "-q + 1/2*v^2",
      "sin(x)*cos(y) - exp(z)",
      "f''(u)*u^(-3)",
      "(1+q^2)^(-1)*p",
      "sqrt(1+x^2)",
      "2/3*x - 5",
  };
  for (const char* s : samples) {
    Expr e = E(s);
    CHECK(bundlecheck::sym::parse(e.str()) == e);
  }
}

TEST_CASE("parse print round trip holds on random polynomials") {
  std::mt19937_64 rng(0x5EED);
  for (int i = 0; i < 50; ++i) {
    Expr e = testutil::random_poly(rng, {"x", "y", "z"}, 4, 3);
    CHECK(bundlecheck::sym::parse(e.str()) == e);
  }
}

TEST_CASE("normalization is idempotent") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    Expr e = testutil::random_poly(rng, {"x", "y"}, 4, 3);
    CHECK(e.normalized() == e);
  }
  Expr f = E("f(x^2+y^2)*x - sin(x)/(1+y^2)");
  CHECK(f.normalized() == f);
}

TEST_CASE("parse rejects malformed input with an offset") {
  CHECK_THROWS_AS(E("x +"), ParseError);
  CHECK_THROWS_AS(E("(x"), ParseError);
  CHECK_THROWS_AS(E("x ^ y"), ParseError);  // exponent must be an integer constant
  CHECK_THROWS_AS(E("1 & 2"), ParseError);
  bool caught = false;
  try {
    E("x + @");
  } catch (const ParseError& p) {
    caught = true;
    CHECK(p.offset == 4);
  }
  CHECK(caught);
}

TEST_CASE("structure of parsed opaque calls") {
  Expr e = E("f(x1^2+x2^2)*x1");
  auto calls = e.opaque_calls();
  REQUIRE(calls.count("f") == 1);
  CHECK(calls["f"] == 0);
  Expr d = e.diff("x1");
  calls = d.opaque_calls();
  CHECK(calls["f"] == 1);  // chain rule raised the order
  auto syms = e.free_symbols();
  CHECK(syms == std::set<std::string>{"x1", "x2"});
}

TEST_CASE("derivative oracles") {
  CHECK(E("x1^2").diff("x1") == E("2*x1"));
  // the two coordinate-change blocks, frozen by hand
  CHECK(E("f(x1^2+x2^2)*x1").diff("x1") == E("2*x1^2*f'(x1^2+x2^2) + f(x1^2+x2^2)"));
  CHECK(E("f(x1^2+x2^2)*x2").diff("x1") == E("2*x1*x2*f'(x1^2+x2^2)"));
  CHECK(E("sin(x)").diff("x") == E("cos(x)"));
  CHECK(E("cos(x)").diff("x") == E("-sin(x)"));
  CHECK(E("exp(2*x)").diff("x") == E("2*exp(2*x)"));
  CHECK(E("log(x)").diff("x") == E("x^(-1)"));
  CHECK(E("sqrt(x)").diff("x") == E("1/2*sqrt(x)^(-1)"));
  CHECK(E("x^(-2)").diff("x") == E("-2*x^(-3)"));
  CHECK(E("y").diff("x").is_zero());
}

TEST_CASE("substitution") {
  std::map<std::string, Expr> swap{{"x", Expr::symbol("y")}, {"y", Expr::symbol("x")}};
  CHECK(E("x + y").substitute(swap) == E("x + y"));
  CHECK(E("x - y").substitute(swap) == E("y - x"));
  std::map<std::string, Expr> rename{{"q", Expr::symbol("x1")}, {"v", Expr::symbol("x2")}};
  CHECK(E("q*v").substitute(rename) == E("x1*x2"));
  std::map<std::string, Expr> lift{{"q", E("f(x1^2+x2^2)*x1")}};
  CHECK(E("q").substitute(lift) == E("f(x1^2+x2^2)*x1"));
}

TEST_CASE("numeric evaluation oracles") {
  sym::Assignment a;
  a.symbols = {{"x1", 3.0}, {"x2", 4.0}};
  CHECK(sym::eval(E("x1^2 + x2^2"), a) == doctest::Approx(25.0));

  sym::Assignment b;
  b.symbols = {{"x1", 1.0}, {"x2", 0.0}};
  b.opaques["f"] = sym::standard_family();
  CHECK(sym::eval(E("f(x1^2+x2^2)*x1"), b) == doctest::Approx(2.5));

  CHECK(sym::eval(E("7/2"), {}) == doctest::Approx(3.5));

  // the built-in family at u = 2: f = 2.2, f' = -4/25
  sym::Assignment c;
  c.symbols = {{"x1", 1.0}, {"x2", 1.0}};
  c.opaques["f"] = sym::standard_family();
  CHECK(sym::eval(E("2*x1^2*f'(x1^2+x2^2) + f(x1^2+x2^2)"), c) == doctest::Approx(1.88));
}

TEST_CASE("evaluation faults") {
  sym::Assignment a;
  a.symbols = {{"x", -1.0}};
  CHECK_THROWS_AS(sym::eval(E("log(x)"), a), EvalError);
  CHECK_THROWS_AS(sym::eval(E("sqrt(x)"), a), EvalError);
  a.symbols["x"] = 0.0;
  CHECK_THROWS_AS(sym::eval(E("x^(-1)"), a), EvalError);
  CHECK_THROWS_AS(sym::eval(E("y"), a), EvalError);  // uncovered symbol
}

TEST_CASE("zero testing verdicts") {
  using sym::ZeroVerdict;
  CHECK(sym::is_zero(E("x*y - y*x")) == ZeroVerdict::Zero);
  CHECK(sym::is_zero(E("(2*x1^2*f'(u)+f(u))*(2*x2*x1*f'(u)) - (2*x2*x1*f'(u))*(2*x1^2*f'(u)+f(u))")) ==
        ZeroVerdict::Zero);
  CHECK(sym::is_zero(E("sin(x)^2 + cos(x)^2 - 1")) == ZeroVerdict::ProbablyZero);
  CHECK(sym::is_zero(E("x^2")) == ZeroVerdict::NonZero);
  CHECK(sym::is_zero(E("2*x1^2*f'(x1^2+x2^2) + f(x1^2+x2^2)")) == ZeroVerdict::NonZero);

  auto w = sym::is_zero_detail(E("x^2"));
  CHECK(w.verdict == ZeroVerdict::NonZero);
  CHECK(w.max_abs > 0.0);
  CHECK(w.max_rel > 0.0);
}

TEST_CASE("zero testing is seed deterministic") {
  sym::ZeroOptions opt;
  auto a = sym::is_zero_detail(E("x^2 - y"), opt);
  auto b = sym::is_zero_detail(E("x^2 - y"), opt);
  CHECK(a.verdict == b.verdict);
  CHECK(a.max_abs == b.max_abs);
  CHECK(a.max_rel == b.max_rel);
}

TEST_CASE("diff linearity and Leibniz spot checks") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 10; ++i) {
    Expr e1 = testutil::random_poly(rng, {"x", "y"}, 3, 2);
    Expr e2 = testutil::random_poly(rng, {"x", "y"}, 3, 2);
    Expr lin = (e1 * Expr(3) + e2 * Expr::rational(1, 2)).diff("x") - Expr(3) * e1.diff("x") -
               Expr::rational(1, 2) * e2.diff("x");
    CHECK(lin.is_zero());
    Expr leib = (e1 * e2).diff("y") - e1 * e2.diff("y") - e1.diff("y") * e2;
    CHECK(leib.is_zero());
  }
}

TEST_CASE("derivatives agree with central differences") {
  std::mt19937_64 rng(7);
  sym::Assignment a;
  const double h = 1e-5;
  for (int i = 0; i < 25; ++i) {
    Expr e = testutil::random_poly(rng, {"x", "y"}, 3, 2);
    double x = 0.3 + 0.05 * static_cast<double>(i);
    a.symbols = {{"x", x}, {"y", 1.1}};
    double sym_val = sym::eval(e.diff("x"), a);
    sym::Assignment hi = a, lo = a;
    hi.symbols["x"] = x + h;
    lo.symbols["x"] = x - h;
    double fd = (sym::eval(e, hi) - sym::eval(e, lo)) / (2 * h);
    CHECK(sym_val == doctest::Approx(fd).epsilon(1e-6));
  }
}

}  // TEST_SUITE
