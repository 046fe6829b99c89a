#pragma once

// Randomized identity suites shared by the property tests and the acceptance
// runner. Each suite draws kInstancesPerSuite seeded instances and counts how
// many violate the identity under is_zero; a correct kernel yields zero
// failures everywhere.

#include <cstdint>
#include <string>
#include <vector>

#include "bundlecheck/bundle/bundle.hpp"
#include "bundlecheck/cotangent/cotangent.hpp"
#include "bundlecheck/geom/map.hpp"
#include "testutil.hpp"

namespace proptest {

using namespace testutil;

inline constexpr int kInstancesPerSuite = 25;

struct SuiteResult {
  std::string name;
  int instances = 0;
  int failures = 0;
};

namespace detail {

using namespace bundlecheck;
using geom::differential;
using geom::exterior_derivative;
using geom::interior_product;
using geom::lie_bracket;
using geom::lie_derivative;

inline Chart suite_chart(int i) {
  if (i % 2 == 0) return Chart("c2", {"x", "y"});
  return Chart("c3", {"x", "y", "z"});
}

// Adapted double chart (q..., v...) plus the canonical structure on it.
inline bundle::TangentStructure canonical_tangent(int n) {
  std::vector<std::string> names;
  std::vector<Expr> base, fiber;
  for (int i = 1; i <= n; ++i) names.push_back("q" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("v" + std::to_string(i));
  Chart c("adapted" + std::to_string(n), names);
  std::vector<Expr> delta(2 * n, Expr(0));
  geom::Tensor11 s(c);
  for (int i = 0; i < n; ++i) {
    base.push_back(c.coord(i));
    fiber.push_back(c.coord(n + i));
    delta[n + i] = c.coord(n + i);
    s.at(n + i, i) = Expr(1);
  }
  bundle::PartialLinearStructure pls{c, geom::VectorField(c, delta), base, fiber};
  return bundle::TangentStructure{pls, s};
}

// SODE against the canonical structure: v-block drives q, free accelerations.
inline geom::VectorField random_sode(std::mt19937_64& rng, const Chart& c, int n) {
  std::vector<Expr> comps(2 * n);
  for (int i = 0; i < n; ++i) {
    comps[i] = c.coord(n + i);
    comps[n + i] = random_poly(rng, c.coords, 2, 2);
  }
  return {c, comps};
}

}  // namespace detail

// Bracket antisymmetry and the Jacobi identity.
inline SuiteResult suite_bracket(std::uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  SuiteResult r{"bracket-antisymmetry-jacobi", 0, 0};
  for (int i = 0; i < kInstancesPerSuite; ++i) {
    Chart c = suite_chart(i);
    auto X = random_field(rng, c), Y = random_field(rng, c), Z = random_field(rng, c);
    auto anti = lie_bracket(X, Y);
    auto yx = lie_bracket(Y, X);
    auto j1 = lie_bracket(X, lie_bracket(Y, Z));
    auto j2 = lie_bracket(Y, lie_bracket(Z, X));
    auto j3 = lie_bracket(Z, lie_bracket(X, Y));
    bool ok = true;
    for (int k = 0; k < c.dim(); ++k) {
      ok = ok && (anti.comps[k] + yx.comps[k]).is_zero();
      ok = ok && vanishes(j1.comps[k] + j2.comps[k] + j3.comps[k]);
    }
    r.instances++;
    if (!ok) r.failures++;
  }
  return r;
}

// L_X a = i_X(da) + d(a(X)).
inline SuiteResult suite_cartan(std::uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  SuiteResult r{"cartan-formula", 0, 0};
  for (int i = 0; i < kInstancesPerSuite; ++i) {
    Chart c = suite_chart(i);
    auto X = random_field(rng, c);
    auto a = random_oneform(rng, c);
    auto lhs = lie_derivative(X, a);
    auto hook = interior_product(X, exterior_derivative(a));
    Expr pairing = Expr(0);
    for (int k = 0; k < c.dim(); ++k) pairing += a.comps[k] * X.comps[k];
    auto exact = differential(c, pairing);
    bool ok = true;
    for (int k = 0; k < c.dim(); ++k)
      ok = ok && vanishes(lhs.comps[k] - hook.comps[k] - exact.comps[k]);
    r.instances++;
    if (!ok) r.failures++;
  }
  return r;
}

// d(dg) = 0, including non-polynomial scalars.
inline SuiteResult suite_d_squared(std::uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  SuiteResult r{"d-squared-zero", 0, 0};
  for (int i = 0; i < kInstancesPerSuite; ++i) {
    Chart c = suite_chart(i);
    Expr g = random_poly(rng, c.coords, 3, 3);
    if (i % 3 == 0) g = g + sym::sin(random_poly(rng, c.coords, 2, 1));
    if (i % 3 == 1) g = g * sym::exp(random_poly(rng, c.coords, 1, 1));
    auto dd = exterior_derivative(differential(c, g));
    bool ok = true;
    for (int a = 0; a < c.dim(); ++a)
      for (int b = a + 1; b < c.dim(); ++b) ok = ok && dd.comp(a, b).is_zero();
    r.instances++;
    if (!ok) r.failures++;
  }
  return r;
}

// (L_X S)(Y) = [X, SY] - S([X, Y]).
inline SuiteResult suite_lie_tensor(std::uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  SuiteResult r{"tensor-lie-bracket-agreement", 0, 0};
  for (int i = 0; i < kInstancesPerSuite; ++i) {
    Chart c = suite_chart(i);
    auto S = random_tensor(rng, c);
    auto X = random_field(rng, c), Y = random_field(rng, c);
    auto lhs = geom::apply(lie_derivative(X, S), Y);
    auto rhs1 = lie_bracket(X, geom::apply(S, Y));
    auto rhs2 = geom::apply(S, lie_bracket(X, Y));
    bool ok = true;
    for (int k = 0; k < c.dim(); ++k)
      ok = ok && vanishes(lhs.comps[k] - rhs1.comps[k] + rhs2.comps[k]);
    r.instances++;
    if (!ok) r.failures++;
  }
  return r;
}

// SODEs form an affine family over the verticals: both criteria accept a
// generated SODE, reject a shifted drive block, and S kills any difference
// of two SODEs.
inline SuiteResult suite_sode_affine(std::uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  SuiteResult r{"sode-affine-family", 0, 0};
  numcheck::VerifyOptions opt;
  for (int i = 0; i < kInstancesPerSuite; ++i) {
    int n = (i % 2) + 1;
    auto T = canonical_tangent(n);
    const Chart& c = T.pls.chart;
    bundle::BasicSubalgebra A(c, T.pls.base_gens);
    auto G1 = random_sode(rng, c, n);
    auto G2 = random_sode(rng, c, n);
    bool ok = bundle::is_sode_tensorial(G1, T, opt);
    ok = ok && bundle::is_sode_algebraic(G1, A, T.pls.delta, opt);
    auto diff = G1;
    for (int k = 0; k < c.dim(); ++k) diff.comps[k] = G1.comps[k] - G2.comps[k];
    auto killed = geom::apply(T.s, diff);
    for (int k = 0; k < c.dim(); ++k) ok = ok && killed.comps[k].is_zero();
    auto bad = G1;
    bad.comps[0] = bad.comps[0] + Expr(1);
    ok = ok && !bundle::is_sode_tensorial(bad, T, opt);
    ok = ok && !bundle::is_sode_algebraic(bad, A, T.pls.delta, opt);
    r.instances++;
    if (!ok) r.failures++;
  }
  return r;
}

// [Delta, Gamma] - Gamma is vertical for every SODE Gamma.
inline SuiteResult suite_deviation_vertical(std::uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  SuiteResult r{"sode-deviation-verticality", 0, 0};
  numcheck::VerifyOptions opt;
  for (int i = 0; i < kInstancesPerSuite; ++i) {
    int n = (i % 2) + 1;
    auto T = canonical_tangent(n);
    const Chart& c = T.pls.chart;
    bundle::BasicSubalgebra A(c, T.pls.base_gens);
    auto G = random_sode(rng, c, n);
    auto dev = lie_bracket(T.pls.delta, G);
    for (int k = 0; k < c.dim(); ++k) dev.comps[k] = dev.comps[k] - G.comps[k];
    r.instances++;
    if (!bundle::is_vertical(dev, A, opt)) r.failures++;
  }
  return r;
}

// Dual action of the canonical S: S* d kills basic functions and returns the
// base differential on SODE derivatives of basic functions; S itself squares
// to zero on arbitrary fields.
inline SuiteResult suite_s_dual(std::uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  SuiteResult r{"vertical-endomorphism-dual-action", 0, 0};
  for (int i = 0; i < kInstancesPerSuite; ++i) {
    int n = (i % 2) + 1;
    auto T = canonical_tangent(n);
    const Chart& c = T.pls.chart;
    std::vector<std::string> base_syms(c.coords.begin(), c.coords.begin() + n);
    Expr g = random_poly(rng, base_syms, 3, 2);
    auto G = random_sode(rng, c, n);
    auto killed = geom::apply_dual(T.s, differential(c, g));
    bool ok = true;
    for (int k = 0; k < c.dim(); ++k) ok = ok && killed.comps[k].is_zero();
    Expr f = lie_derivative(G, g);
    auto recovered = geom::apply_dual(T.s, differential(c, f));
    auto dg = differential(c, g);
    for (int k = 0; k < c.dim(); ++k) ok = ok && vanishes(recovered.comps[k] - dg.comps[k]);
    auto X = random_field(rng, c);
    auto ss = geom::apply(T.s, geom::apply(T.s, X));
    for (int k = 0; k < c.dim(); ++k) ok = ok && ss.comps[k].is_zero();
    r.instances++;
    if (!ok) r.failures++;
  }
  return r;
}

// The bivector inverted out of a closed nondegenerate two-form satisfies the
// Jacobi identity; built from canonical pairs plus a random basic shift.
inline SuiteResult suite_lambda_jacobi(std::uint64_t seed) {
  using namespace detail;
  std::mt19937_64 rng(seed);
  SuiteResult r{"bivector-jacobi", 0, 0};
  numcheck::VerifyOptions opt;
  for (int i = 0; i < kInstancesPerSuite; ++i) {
    int n = (i % 2) + 1;
    std::vector<std::string> names, base, fiber;
    for (int k = 1; k <= n; ++k) names.push_back("q" + std::to_string(k));
    for (int k = 1; k <= n; ++k) names.push_back("p" + std::to_string(k));
    Chart c("dual" + std::to_string(n), names);
    base.assign(names.begin(), names.begin() + n);
    fiber.assign(names.begin() + n, names.end());
    std::vector<Expr> comps(2 * n, Expr(0));
    for (int k = 0; k < n; ++k) comps[k] = c.coord(n + k) + random_poly(rng, base, 2, 2);
    auto C = cotangent::make_structure(c, base, fiber, geom::OneForm(c, comps), std::nullopt,
                                       opt);
    auto L = cotangent::poisson_from_omega(C.omega, opt);
    bool ok = true;
    for (const Expr& res : cotangent::jacobi_residuals(L)) ok = ok && vanishes(res);
    r.instances++;
    if (!ok) r.failures++;
  }
  return r;
}

inline std::vector<SuiteResult> run_all_property_suites(std::uint64_t seed) {
  return {suite_bracket(seed),        suite_cartan(seed + 1),
          suite_d_squared(seed + 2),  suite_lie_tensor(seed + 3),
          suite_sode_affine(seed + 4), suite_deviation_vertical(seed + 5),
          suite_s_dual(seed + 6),     suite_lambda_jacobi(seed + 7)};
}

}  // namespace proptest
