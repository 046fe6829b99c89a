#include <doctest.h>

#include "bundlecheck/geom/calculus.hpp"
#include "bundlecheck/numcheck/numcheck.hpp"
#include "bundlecheck/sym/parse.hpp"
#include "testutil.hpp"

using namespace bundlecheck;
using geom::Chart;
using geom::OneForm;
using geom::Tensor11;
using geom::VectorField;
using numcheck::SampleDomain;
using sym::Expr;
using testutil::E;

TEST_SUITE("numcheck") {

TEST_CASE("sampling is deterministic in the seed") {
  Chart c("c", {"x", "y"});
  SampleDomain dom;
  auto a = numcheck::sample_points(c, dom);
  auto b = numcheck::sample_points(c, dom);
  REQUIRE(a.size() == static_cast<std::size_t>(dom.count));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].symbols.at("x") == b[i].symbols.at("x"));
    CHECK(a[i].symbols.at("y") == b[i].symbols.at("y"));
  }
  dom.seed = dom.seed + 1;
  auto other = numcheck::sample_points(c, dom);
  CHECK(other[0].symbols.at("x") != a[0].symbols.at("x"));
  for (const auto& pt : a)
    for (const auto& [name, val] : pt.symbols) {
      CHECK(std::abs(val) >= dom.lo);
      CHECK(std::abs(val) <= dom.hi);
    }
}

TEST_CASE("residual sweep separates zero from nonzero") {
  Chart c("c", {"x", "y"});
  SampleDomain dom;
  auto pass = numcheck::residual_sweep({E("x*y - y*x"), Expr(0)}, c, dom);
  CHECK(pass.pass());
  CHECK(pass.points == dom.count);
  CHECK(pass.max_abs == 0.0);

  auto fail = numcheck::residual_sweep({E("x^2")}, c, dom);
  CHECK(!fail.pass());
  CHECK(fail.failures > 0);
  CHECK(fail.max_abs > 0.01);
}

TEST_CASE("residual sweep resamples out-of-domain points") {
  Chart c("c", {"x"});
  SampleDomain dom;
  // sqrt forces x > 0, so half the raw draws are rejected and redrawn
  auto s = numcheck::residual_sweep({E("sqrt(x)^2 - x")}, c, dom);
  CHECK(s.pass());
  CHECK(s.points == dom.count);
}

TEST_CASE("impossible domains exhaust the retry budget") {
  Chart c("c", {"x"});
  SampleDomain dom;
  CHECK_THROWS_AS(numcheck::residual_sweep({E("sqrt(-1 - x^2)")}, c, dom), EvalError);
}

TEST_CASE("numeric rank") {
  Chart c("c", {"x", "y"});
  SampleDomain dom;
  sym::ExprMatrix id = sym::ExprMatrix::identity(2);
  auto r = numcheck::numeric_rank(id, c, dom);
  CHECK(r.min_rank == 2);
  CHECK(r.max_rank == 2);

  sym::ExprMatrix degenerate(2, 2);
  degenerate.at(0, 0) = E("x");
  degenerate.at(0, 1) = E("x");
  degenerate.at(1, 0) = E("x");
  degenerate.at(1, 1) = E("x");
  r = numcheck::numeric_rank(degenerate, c, dom);
  CHECK(r.min_rank == 1);
  CHECK(r.max_rank == 1);

  sym::ExprMatrix zero(2, 2);
  r = numcheck::numeric_rank(zero, c, dom);
  CHECK(r.max_rank == 0);
}

TEST_CASE("vanishing on a zero set") {
  Chart c("qv", {"q", "v"});
  SampleDomain dom;
  // v*q vanishes where v does; q does not
  auto good = numcheck::vanishing_on_zero_set({E("v")}, {E("v*q")}, c, dom);
  CHECK(good.pass());
  auto bad = numcheck::vanishing_on_zero_set({E("v")}, {E("q")}, c, dom);
  CHECK(!bad.pass());
}

TEST_CASE("pointwise solvability") {
  Chart c("c", {"x"});
  SampleDomain dom;
  sym::ExprMatrix m(2, 2);
  m.at(0, 0) = Expr(1);
  m.at(1, 1) = E("1 + x^2");
  auto ok = numcheck::pointwise_solvable(m, {E("x"), E("x^2")}, c, dom);
  CHECK(ok.pass());

  sym::ExprMatrix singular(2, 2);  // all zero rows cannot reach rhs = (1, 0)
  auto no = numcheck::pointwise_solvable(singular, {Expr(1), Expr(0)}, c, dom);
  CHECK(!no.pass());
}

TEST_CASE("scalar flow check") {
  Chart c("c", {"x", "y"});
  SampleDomain dom;
  VectorField rot(c, {E("y"), E("-x")});
  Expr g = E("x^2 + y^2");
  CHECK(numcheck::flow_check(rot, g, geom::lie_derivative(rot, g), dom).pass());
  CHECK(numcheck::flow_check(rot, E("x*y"), geom::lie_derivative(rot, E("x*y")), dom).pass());
}

TEST_CASE("one-form flow check") {
  Chart c("c", {"x", "y"});
  SampleDomain dom;
  VectorField X(c, {E("y"), E("x^2")});
  OneForm a(c, {E("x*y"), E("y - 1")});
  CHECK(numcheck::flow_check(X, a, geom::lie_derivative(X, a), dom).pass());
}

TEST_CASE("tensor flow check accepts the true derivative and flags a sign flip") {
  Chart c("qv", {"q", "v"});
  SampleDomain dom;
  VectorField delta(c, {Expr(0), E("v")});
  Tensor11 s(c);
  s.at(1, 0) = Expr(1);
  Tensor11 minus_s(c);
  minus_s.at(1, 0) = Expr(-1);

  // true relation: L_Delta S = -S
  auto good = numcheck::flow_check(delta, s, minus_s, dom);
  CHECK(good.pass());

  // planted wrong sign: claimed derivative +S is off by 2S, relative error
  // around 2 on the unit-size entries
  auto bad = numcheck::flow_check(delta, s, s, dom);
  CHECK(!bad.pass());
  CHECK(bad.max_rel > 0.5);
}

TEST_CASE("verify options expose the shared zero-test knobs") {
  numcheck::VerifyOptions opt;
  auto z = opt.zero();
  CHECK(z.trials == numcheck::kDefaultSampleCount);
  CHECK(z.tolerance == numcheck::kAlgebraicTol);
  CHECK(z.seed == numcheck::kDefaultSeed);
  opt.domain.seed = 42;
  opt.algebraic = 1e-7;
  z = opt.zero();
  CHECK(z.seed == 42);
  CHECK(z.tolerance == 1e-7);
}

}  // TEST_SUITE
