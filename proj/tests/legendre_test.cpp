#include <doctest.h>

#include "bundlecheck/legendre/legendre.hpp"
#include "bundlecheck/sym/parse.hpp"
#include "testutil.hpp"

using namespace bundlecheck;
using geom::Chart;
using legendre::FiberedChart;
using legendre::Metric;
using sym::Expr;
using sym::ExprMatrix;
using testutil::E;

namespace {

numcheck::VerifyOptions opts() { return {}; }

FiberedChart velocity() { return FiberedChart(Chart("velocity", {"q", "v"}), {"q"}, {"v"}); }
Chart momentum() { return Chart("momentum", {"q", "p"}); }

ExprMatrix one_by_one(const Expr& e) {
  ExprMatrix m(1, 1);
  m.at(0, 0) = e;
  return m;
}

}  // namespace

TEST_SUITE("legendre") {

TEST_CASE("metric validation") {
  CHECK_NOTHROW(Metric({"q"}, one_by_one(E("1 + q^2"))));
  CHECK_THROWS_AS(Metric({"q"}, one_by_one(E("v"))), InvalidArgument);  // not basic
  ExprMatrix skew(2, 2);
  skew.at(0, 1) = Expr(1);
  skew.at(1, 0) = Expr(-1);
  CHECK_THROWS_AS(Metric({"q1", "q2"}, skew), InvalidArgument);  // not symmetric
  ExprMatrix wrong(1, 2);
  CHECK_THROWS_AS(Metric({"q1", "q2"}, wrong), InvalidArgument);
}

TEST_CASE("positive definiteness is sampled") {
  CHECK(legendre::is_positive_definite(Metric({"q"}, one_by_one(Expr(1))), opts()));
  CHECK(legendre::is_positive_definite(Metric({"q"}, one_by_one(E("1 + q^2"))), opts()));
  CHECK(!legendre::is_positive_definite(Metric({"q"}, one_by_one(Expr(-1))), opts()));

  ExprMatrix indefinite(2, 2);
  indefinite.at(0, 0) = Expr(1);
  indefinite.at(0, 1) = Expr(2);
  indefinite.at(1, 0) = Expr(2);
  indefinite.at(1, 1) = Expr(1);  // eigenvalues 3 and -1
  CHECK(!legendre::is_positive_definite(Metric({"q1", "q2"}, indefinite), opts()));
}

TEST_CASE("quadratic fiber energy of a metric") {
  FiberedChart tc = velocity();
  CHECK(legendre::geodesic_lagrangian(Metric({"q"}, one_by_one(Expr(1))), tc) == E("1/2*v^2"));
  CHECK(legendre::geodesic_lagrangian(Metric({"q"}, one_by_one(E("1 + q^2"))), tc) ==
        E("1/2*(1+q^2)*v^2"));
  CHECK_THROWS_AS(legendre::geodesic_lagrangian(Metric({"x"}, one_by_one(Expr(1))), tc),
                  InvalidArgument);
}

TEST_CASE("fiber derivative oracles") {
  FiberedChart tc = velocity();
  Chart dual = momentum();

  auto flat = legendre::fiber_derivative(E("1/2*v^2"), tc, dual, opts());
  CHECK(flat.map.forward[0] == E("q"));
  CHECK(flat.map.forward[1] == E("v"));
  CHECK((*flat.map.inverse)[1] == E("p"));

  auto curved = legendre::fiber_derivative(E("1/2*(1+q^2)*v^2"), tc, dual, opts());
  CHECK(curved.map.forward[1] == E("(1+q^2)*v"));
  CHECK((*curved.map.inverse)[1] == E("p*(1+q^2)^(-1)"));
  for (const Expr& r : geom::roundtrip_residuals(curved.map)) CHECK(r.is_zero());

  auto gauged = legendre::fiber_derivative(E("1/2*v^2 + q*v"), tc, dual, opts());
  CHECK(gauged.map.forward[1] == E("v + q"));
  CHECK((*gauged.map.inverse)[1] == E("p - q"));
}

TEST_CASE("hyperregularity") {
  FiberedChart tc = velocity();
  CHECK(legendre::is_hyperregular(E("1/2*v^2"), tc, opts()));
  CHECK(legendre::is_hyperregular(E("1/2*(1+q^2)*v^2"), tc, opts()));
  CHECK(!legendre::is_hyperregular(E("v"), tc, opts()));  // flat fiber Hessian
  CHECK(!legendre::is_hyperregular(E("q^2"), tc, opts()));
  // quartic: invertible almost everywhere but not fiber-quadratic
  CHECK(legendre::is_hyperregular(E("v^4"), tc, opts()));
  CHECK_THROWS_AS(legendre::fiber_derivative(E("v^4"), tc, momentum(), opts()),
                  InvalidArgument);
}

TEST_CASE("structure one-form of a lagrangian") {
  FiberedChart tc = velocity();
  auto theta = legendre::theta_g(E("1/2*(1+q^2)*v^2"), tc);
  CHECK(theta.comps[0] == E("(1+q^2)*v"));
  CHECK(theta.comps[1].is_zero());
  auto flatline = legendre::theta_g(Expr(3), tc);
  CHECK(flatline.comps[0].is_zero());
  CHECK(flatline.comps[1].is_zero());
}

TEST_CASE("transport lands on the canonical one-form for metric lagrangians") {
  FiberedChart tc = velocity();
  Chart dual = momentum();
  for (const char* lag : {"1/2*v^2", "1/2*(1+q^2)*v^2"}) {
    Expr L = E(lag);
    auto FL = legendre::fiber_derivative(L, tc, dual, opts());
    auto theta = legendre::theta_g(L, tc);
    auto C = legendre::transport_theta(FL, theta, opts());
    CHECK(C.theta.comps[0] == Expr::symbol("p"));  // exact, after normalization
    CHECK(C.theta.comps[1].is_zero());
    CHECK(C.delta.comps[0].is_zero());
    CHECK(C.delta.comps[1] == Expr::symbol("p"));
    for (const Expr& r : legendre::theta_roundtrip_residuals(FL, theta, C)) CHECK(r.is_zero());
    CHECK(cotangent::verify_cotangent_structure(C, opts()).all_pass());
  }
}

TEST_CASE("gauge terms shift the zero section but not the transported form") {
  FiberedChart tc = velocity();
  Chart dual = momentum();
  Expr L = legendre::gauge_shift(E("1/2*v^2"), E("1/2*q^2"), tc, opts());
  CHECK(L == E("1/2*v^2 + q*v"));

  auto FL = legendre::fiber_derivative(L, tc, dual, opts());
  auto C = legendre::transport_theta(FL, legendre::theta_g(L, tc), opts());
  CHECK(C.theta.comps[0] == Expr::symbol("p"));
  CHECK(C.delta.comps[1] == E("p - q"));
  std::map<std::string, Expr> on_section{{"p", Expr::symbol("q")}};
  CHECK(C.delta.comps[1].substitute(on_section).is_zero());

  // two shifts compose additively
  Expr twice = legendre::gauge_shift(legendre::gauge_shift(E("1/2*v^2"), E("q^3"), tc, opts()),
                                     E("q"), tc, opts());
  CHECK(twice == legendre::gauge_shift(E("1/2*v^2"), E("q^3 + q"), tc, opts()));
  CHECK(legendre::gauge_shift(E("1/2*v^2"), Expr(0), tc, opts()) == E("1/2*v^2"));
  CHECK_THROWS_AS(legendre::gauge_shift(E("1/2*v^2"), E("v"), tc, opts()), InvalidArgument);
}

TEST_CASE("composing two fiber derivatives") {
  FiberedChart tc = velocity();
  Chart dual = momentum();
  auto flat = legendre::fiber_derivative(E("1/2*v^2"), tc, dual, opts());
  auto curved = legendre::fiber_derivative(E("1/2*(1+q^2)*v^2"), tc, dual, opts());
  auto gauged = legendre::fiber_derivative(E("1/2*v^2 + q*v"), tc, dual, opts());

  auto same = legendre::fouling_composition(flat, flat, opts());
  CHECK(same.map.forward[0] == E("q"));
  CHECK(same.map.forward[1] == E("p"));
  CHECK(same.preserves_canonical);

  auto rescale = legendre::fouling_composition(flat, curved, opts());
  CHECK(rescale.map.forward[1] == E("(1+q^2)*p"));
  CHECK(!rescale.preserves_canonical);

  auto translate = legendre::fouling_composition(flat, gauged, opts());
  CHECK(translate.map.forward[1] == E("p + q"));
  CHECK(!translate.preserves_canonical);
}

TEST_CASE("fouling requires a shared source") {
  FiberedChart tc = velocity();
  FiberedChart other(Chart("other", {"x", "w"}), {"x"}, {"w"});
  auto a = legendre::fiber_derivative(E("1/2*v^2"), tc, momentum(), opts());
  auto b = legendre::fiber_derivative(E("1/2*w^2"), other, Chart("om", {"x", "p"}), opts());
  CHECK_THROWS_AS(legendre::fouling_composition(a, b, opts()), Error);
}

}  // TEST_SUITE
