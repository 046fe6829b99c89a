#pragma once

#include <optional>

#include "bundlecheck/bundle/bundle.hpp"
#include "bundlecheck/geom/map.hpp"

namespace bundlecheck::cotangent {

using geom::Chart;
using geom::OneForm;
using geom::TwoForm;
using geom::VectorField;
using numcheck::VerifyOptions;
using sym::Expr;

// A dual-side structure on a chart split into a base block and its dual
// block (coordinate names, same order and length). theta is the structure
// one-form, omega = -d(theta) is derived, delta is the grading field
// (supplied or recovered from theta).
struct CotangentStructure {
  Chart chart;
  std::vector<std::string> base;
  std::vector<std::string> fiber;
  OneForm theta;
  TwoForm omega;
  VectorField delta;

  int pairs() const { return static_cast<int>(base.size()); }
  bundle::BasicSubalgebra base_subalgebra() const;
};

// theta = sum fiber_i d(base_i), delta = sum fiber_i d/d(fiber_i).
CotangentStructure canonical_structure(const Chart& chart, std::vector<std::string> base,
                                       std::vector<std::string> fiber);

// Wraps an arbitrary theta: derives omega and recovers delta from theta
// unless one is supplied.
CotangentStructure make_structure(const Chart& chart, std::vector<std::string> base,
                                  std::vector<std::string> fiber, OneForm theta,
                                  std::optional<VectorField> delta, const VerifyOptions& opt);

// The grading field determined by theta through its own differential:
// the unique solution of i_Delta(-d theta) = -theta, re-verified by is_zero.
VectorField liouville_from_theta(const OneForm& theta, const VerifyOptions& opt);

// Check list (one report entry each):
//   semibasic          theta annihilates the vertical basis of the base block
//   omega-rank         top wedge power of omega = -d(theta) is nonzero
//   omega-closed       exact by construction, recorded as such
//   vertical-lagrangian  omega vanishes on pairs of vertical basis fields
//   delta-compat       i_Delta d(theta) = theta
//   theta-kernel       theta(delta) = 0
StructureReport verify_cotangent_structure(const CotangentStructure& C, const VerifyOptions& opt);

// Antisymmetric bivector as a full component matrix, kept unpacked so the
// contraction Gamma^i = L^{ij} d_j H stays index-direct.
struct PoissonBivector {
  Chart chart;
  sym::ExprMatrix comps;
};

// L = inverse of the transposed component grid of omega, so that
// L^{ik} w_{jk} = delta^i_j; re-verified by is_zero of W L^T - I.
PoissonBivector poisson_from_omega(const TwoForm& omega, const VerifyOptions& opt);

// Gamma^i = L^{ij} d_j H.
VectorField hamiltonian_field(const Expr& H, const PoissonBivector& L);

// Same, but from omega directly, and re-verified: i_Gamma omega = dH.
VectorField hamiltonian_field(const Expr& H, const TwoForm& omega, const VerifyOptions& opt);

// Poisson bracket {f, g} = L^{ij} d_i f d_j g.
Expr poisson_bracket(const Expr& f, const Expr& g, const PoissonBivector& L);

// Cyclic-sum obstruction terms, all of which vanish when L satisfies the
// Jacobi identity; indexed (i,j,k), row-major over i<j<k.
std::vector<Expr> jacobi_residuals(const PoissonBivector& L);

struct AlternativeDescription {
  PoissonBivector bivector;  // pushed forward
  Expr hamiltonian;          // composed with the inverse map
  VectorField field;         // hamiltonian field of the pushed pair
  bool matches;              // equals the pushforward of the original field
};

// Pushes (L, H) through an invertible map and checks that the Hamiltonian
// field of the pushed pair is the pushforward of the original one.
AlternativeDescription alternative_hamiltonian_description(const geom::CoordinateMap& phi,
                                                           const PoissonBivector& L,
                                                           const Expr& H,
                                                           const VerifyOptions& opt);

// Fiberwise linear function of a basic field X = X^i d/d(base_i):
// returns sum fiber_i X^i, Delta-degree 1.
Expr hat_vectorfield(const CotangentStructure& C, const std::vector<Expr>& comps,
                     const VerifyOptions& opt);

}  // namespace bundlecheck::cotangent
