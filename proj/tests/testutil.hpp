#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bundlecheck/geom/map.hpp"
#include "bundlecheck/sym/parse.hpp"
#include "bundlecheck/sym/zerotest.hpp"

namespace testutil {

using bundlecheck::geom::Chart;
using bundlecheck::geom::OneForm;
using bundlecheck::geom::Tensor11;
using bundlecheck::geom::VectorField;
using bundlecheck::sym::Expr;
using bundlecheck::sym::ZeroVerdict;

inline Expr E(const std::string& text) { return bundlecheck::sym::parse(text); }

inline ZeroVerdict zero_verdict(const Expr& e) { return bundlecheck::sym::is_zero(e); }

// True unless sampling finds a nonzero witness.
inline bool vanishes(const Expr& e) { return zero_verdict(e) != ZeroVerdict::NonZero; }

// Random polynomial over the given symbols: a handful of monomials with small
// nonzero integer coefficients, total degree <= deg per monomial.
inline Expr random_poly(std::mt19937_64& rng, const std::vector<std::string>& syms,
                        int terms = 3, int deg = 2) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(syms.size()) - 1);
  std::uniform_int_distribution<int> degree(0, deg);
  std::vector<Expr> acc;
  for (int t = 0; t < terms; ++t) {
    int c = coef(rng);
    if (c == 0) c = 1;
    std::vector<Expr> factors{Expr(c)};
    int d = degree(rng);
    for (int k = 0; k < d; ++k) factors.push_back(Expr::symbol(syms[pick(rng)]));
    acc.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(acc));
}

inline VectorField random_field(std::mt19937_64& rng, const Chart& c, int terms = 2,
                                int deg = 2) {
  std::vector<Expr> comps;
  comps.reserve(c.coords.size());
  for (int i = 0; i < c.dim(); ++i) comps.push_back(random_poly(rng, c.coords, terms, deg));
  return {c, std::move(comps)};
}

inline OneForm random_oneform(std::mt19937_64& rng, const Chart& c, int terms = 2,
                              int deg = 2) {
  std::vector<Expr> comps;
  for (int i = 0; i < c.dim(); ++i) comps.push_back(random_poly(rng, c.coords, terms, deg));
  return {c, std::move(comps)};
}

inline Tensor11 random_tensor(std::mt19937_64& rng, const Chart& c, int terms = 2,
                              int deg = 2) {
  Tensor11 s(c);
  for (int i = 0; i < c.dim(); ++i)
    for (int j = 0; j < c.dim(); ++j) s.at(i, j) = random_poly(rng, c.coords, terms, deg);
  return s;
}

inline Chart plane() { return Chart("plane", {"x1", "x2"}); }
inline Chart qv() { return Chart("velocity", {"q", "v"}); }
inline Chart qp() { return Chart("momentum", {"q", "p"}); }

}  // namespace testutil
