#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bundlecheck/geom/chart.hpp"
#include "bundlecheck/numcheck/tolerances.hpp"
#include "bundlecheck/sym/eval.hpp"
#include "bundlecheck/sym/matrix.hpp"

namespace bundlecheck::numcheck {

using geom::Chart;
using geom::OneForm;
using geom::Tensor11;
using geom::VectorField;
using sym::Expr;

struct SampleDomain {
  double lo = kSampleLo;  // |coordinate| window, both signs drawn
  double hi = kSampleHi;
  int count = kDefaultSampleCount;
  std::uint64_t seed = kDefaultSeed;
  sym::OpaqueTable opaques;  // names not listed fall back to standard_family()
};

// Deterministic sample points: every chart coordinate gets an independent
// draw. The table of opaque realizations is copied into each assignment.
std::vector<sym::Assignment> sample_points(const Chart& chart, const SampleDomain& dom);

// One knob bundle shared by every verification entry point. `algebraic`
// bounds residuals of exact identities, `finite_difference` bounds the flow
// comparisons (central difference, step kFlowStep).
struct VerifyOptions {
  SampleDomain domain;
  double algebraic = kAlgebraicTol;
  double finite_difference = kFiniteDiffTol;

  sym::ZeroOptions zero() const;
};

struct ResidualSummary {
  double max_abs = 0.0;
  double max_rel = 0.0;
  int points = 0;
  int failures = 0;
  double tolerance = kAlgebraicTol;

  bool pass() const { return points > 0 && failures == 0; }
  void record(double abs, double scale);
};

// Evaluates each residual expression at `dom.count` points and flags any
// value with |v| > tolerance * (1 + scale), scale being the largest term
// magnitude at that point. Points that leave an evaluation domain are
// redrawn; the retry budget is kResampleFactor * count.
ResidualSummary residual_sweep(const std::vector<Expr>& residuals, const Chart& chart,
                               const SampleDomain& dom, double tolerance = kAlgebraicTol);

struct RankSweep {
  int min_rank = 0;
  int max_rank = 0;
  int points = 0;
};

// Singular-value rank of the matrix at each sample point; a singular value
// counts when it exceeds kRankTolFactor times the largest one.
RankSweep numeric_rank(const sym::ExprMatrix& m, const Chart& chart, const SampleDomain& dom);

// Projects each sample point onto { level = 0 } by Gauss-Newton and sweeps
// |values| there: checks that `values` vanish wherever the level functions
// do. Points whose projection stalls are redrawn under the usual budget.
ResidualSummary vanishing_on_zero_set(const std::vector<Expr>& level, const std::vector<Expr>& values,
                                      const Chart& chart, const SampleDomain& dom,
                                      double tolerance = kAlgebraicTol);

// Least-squares solvability of m(x) xi = rhs(x) at each sample point: the
// residual of the best xi is swept against `tolerance`, scaled by |rhs|.
ResidualSummary pointwise_solvable(const sym::ExprMatrix& m, const std::vector<Expr>& rhs,
                                   const Chart& chart, const SampleDomain& dom,
                                   double tolerance = kAlgebraicTol);

// Finite-difference checks of Lie derivatives along the Euler step
//   psi_t(x) = x + t X(x),
// a curve of maps through the identity with velocity X, so the central
// difference of the pullback at t = +-h converges to L_X at O(h^2).
// Scalars: (g(psi_h x) - g(psi_-h x)) / 2h.
ResidualSummary flow_check(const VectorField& X, const Expr& g, const Expr& lie_sym,
                           const SampleDomain& dom, double h = kFlowStep,
                           double tolerance = kFiniteDiffTol);

// One-forms: (psi_t^* a)_i(x) = a_j(psi_t x) (I + t DX)^j_i with
// DX^j_i = d_i X^j evaluated at x.
ResidualSummary flow_check(const VectorField& X, const OneForm& a, const OneForm& lie_sym,
                           const SampleDomain& dom, double h = kFlowStep,
                           double tolerance = kFiniteDiffTol);

// (1,1)-tensors: (psi_t^* S)(x) = (I + t DX)^{-1} S(psi_t x) (I + t DX).
ResidualSummary flow_check(const VectorField& X, const Tensor11& S, const Tensor11& lie_sym,
                           const SampleDomain& dom, double h = kFlowStep,
                           double tolerance = kFiniteDiffTol);

}  // namespace bundlecheck::numcheck
