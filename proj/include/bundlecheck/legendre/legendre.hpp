#pragma once

#include "bundlecheck/cotangent/cotangent.hpp"

namespace bundlecheck::legendre {

using cotangent::CotangentStructure;
using geom::Chart;
using geom::OneForm;
using geom::VectorField;
using numcheck::VerifyOptions;
using sym::Expr;

// A chart split into base coordinates and the fiber coordinates over them
// (velocities on the source side, momenta on the dual side).
struct FiberedChart {
  Chart chart;
  std::vector<std::string> base;
  std::vector<std::string> fiber;

  FiberedChart() = default;
  FiberedChart(Chart c, std::vector<std::string> b, std::vector<std::string> f);
  int pairs() const { return static_cast<int>(base.size()); }
};

// Symmetric coefficient matrix over the base block; entries may use base
// symbols only.
struct Metric {
  std::vector<std::string> base;
  sym::ExprMatrix g;

  Metric(std::vector<std::string> b, sym::ExprMatrix m);
};

// All eigenvalues positive at every sampled base point.
bool is_positive_definite(const Metric& m, const VerifyOptions& opt);

// (1/2) g_jk(q) v^j v^k on the fibered chart; grading degree 2 in the fiber.
Expr geodesic_lagrangian(const Metric& m, const FiberedChart& tc);

// Fiber-preserving map built from a Lagrangian, with its symbolic inverse.
struct LegendreMap {
  geom::CoordinateMap map;  // (q, v) -> (q, p = dL/dv), inverse included
  Expr lagrangian;
  FiberedChart source;
  FiberedChart target;
};

// Fiber Hessian d2L/dv dv has nonzero determinant (structural for
// fiber-quadratic L, sampled otherwise).
bool is_hyperregular(const Expr& L, const FiberedChart& tc, const VerifyOptions& opt);

// p_k = dL/dv^k. The dual chart must list the same base names followed by
// the momentum names. Inversion is a symbolic linear solve, so L must be
// fiber-quadratic (an affine fiber term is fine); anything else throws.
// Round-trip residuals of the returned map are re-verified.
LegendreMap fiber_derivative(const Expr& L, const FiberedChart& tc, const Chart& dual_chart,
                             const VerifyOptions& opt);

// theta = (dL/dv^k) d(q^k): the fiber differential riding the base coframe.
OneForm theta_g(const Expr& L, const FiberedChart& tc);

// Pullback of theta_g along the inverse Legendre map, packaged with the
// transported grading field FL_*(v^k d/dv^k).
CotangentStructure transport_theta(const LegendreMap& FL, const OneForm& theta,
                                   const VerifyOptions& opt);

// Components of (FL)^* C.theta - theta_g: all zero when the transport is
// consistent with the map.
std::vector<Expr> theta_roundtrip_residuals(const LegendreMap& FL, const OneForm& theta,
                                            const CotangentStructure& C);

// L + v^i dF/dq^i for a base function F; shifts the dual zero section to
// p = dF without changing the transported one-form.
Expr gauge_shift(const Expr& L, const Expr& F, const FiberedChart& tc, const VerifyOptions& opt);

struct FoulingResult {
  geom::CoordinateMap map;  // second map after the first's inverse
  bool preserves_canonical;
};

// FL2 o FL1^{-1} on the dual charts, with a verdict on whether it pulls the
// canonical one-form back to itself.
FoulingResult fouling_composition(const LegendreMap& FL1, const LegendreMap& FL2,
                                  const VerifyOptions& opt);

}  // namespace bundlecheck::legendre
