#pragma once

#include <optional>

#include "bundlecheck/geom/calculus.hpp"

namespace bundlecheck::geom {

// A smooth map between charts, given componentwise. `forward[a]` is the a-th
// target coordinate as an expression in the source coordinates. The inverse,
// when present, is expressed in the target coordinates. Operations that move
// objects against the map direction require the inverse and throw otherwise.
struct CoordinateMap {
  Chart source;
  Chart target;
  std::vector<Expr> forward;
  std::optional<std::vector<Expr>> inverse;

  CoordinateMap(Chart src, Chart tgt, std::vector<Expr> fwd,
                std::optional<std::vector<Expr>> inv = std::nullopt);

  bool has_inverse() const { return inverse.has_value(); }
};

CoordinateMap identity_map(const Chart& c);

// Swaps the two directions; requires the inverse.
CoordinateMap inverted(const CoordinateMap& m);

// second after first; charts must line up.
CoordinateMap composed(const CoordinateMap& first, const CoordinateMap& second);

// J[a][i] = d forward_a / d source_i
sym::ExprMatrix jacobian(const CoordinateMap& m);

// g on the target pulled back to the source: g o forward.
Expr pullback_function(const CoordinateMap& m, const Expr& g);

// g on the source pushed to the target: g o inverse. Requires the inverse.
Expr pushforward_function(const CoordinateMap& m, const Expr& g);

// (phi_* X)^a = (J^a_i X^i) o inverse. Requires the inverse.
VectorField pushforward(const CoordinateMap& m, const VectorField& X);

// (phi^* a)_i = (a_b o forward) * J^b_i
OneForm pullback(const CoordinateMap& m, const OneForm& a);

// Residuals of the claim phi_* X = Y without needing the inverse:
//   r^a = J^a_i X^i - Y^a o forward   (expressions on the source chart).
std::vector<Expr> pushforward_residuals(const CoordinateMap& m, const VectorField& X,
                                        const VectorField& Y);

// Round-trip residuals when the inverse is present:
//   inverse(forward(x)) - x per source coordinate, and
//   forward(inverse(y)) - y per target coordinate.
std::vector<Expr> roundtrip_residuals(const CoordinateMap& m);

std::map<std::string, Expr> substitution_to_source(const CoordinateMap& m);  // target syms -> forward exprs
std::map<std::string, Expr> substitution_to_target(const CoordinateMap& m);  // source syms -> inverse exprs

}  // namespace bundlecheck::geom
