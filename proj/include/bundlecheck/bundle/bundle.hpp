#pragma once

#include <optional>

#include "bundlecheck/geom/calculus.hpp"
#include "bundlecheck/numcheck/numcheck.hpp"
#include "bundlecheck/report.hpp"

namespace bundlecheck::bundle {

using geom::Chart;
using geom::Tensor11;
using geom::VectorField;
using numcheck::VerifyOptions;
using sym::Expr;

// Functions singling out the base: the fibers are whatever their common
// level sets are. Functional independence is a numeric rank condition, not
// something we try to decide symbolically.
struct BasicSubalgebra {
  Chart chart;
  std::vector<Expr> generators;

  BasicSubalgebra(Chart c, std::vector<Expr> gens);
  int rank() const { return static_cast<int>(generators.size()); }
};

// Rows are generator gradients: J[i][j] = d gen_i / d x_j.
sym::ExprMatrix generator_jacobian(const BasicSubalgebra& A);

// Numeric independence sweep of the generator Jacobian; full means
// min_rank == max_rank == rank().
numcheck::RankSweep independence_rank(const BasicSubalgebra& A, const VerifyOptions& opt);

// Kernel basis of the generator Jacobian with denominators cleared; each
// returned field is re-verified to annihilate every generator.
std::vector<VectorField> vertical_distribution(const BasicSubalgebra& A, const VerifyOptions& opt);

// L_Y gen = 0 for every generator.
bool is_vertical(const VectorField& Y, const BasicSubalgebra& A, const VerifyOptions& opt);

struct Projectability {
  bool vertical = false;
  bool projectable = false;
  std::vector<Expr> action;  // L_Y gen_i, the would-be projected action
};

// Y projects iff each L_Y gen_i is itself a function of the generators,
// detected by annihilation under the vertical basis.
Projectability projectability(const VectorField& Y, const BasicSubalgebra& A,
                              const VerifyOptions& opt);

// Smallest k in {0..4} with L_Delta g = k g, if any.
std::optional<int> degree(const Expr& g, const VectorField& delta, const VerifyOptions& opt);

enum class FieldClass { FiberwiseLinear, Translational, Neither };
const char* field_class_name(FieldClass c);

// FiberwiseLinear when [Delta, X] = 0, Translational when [Delta, X] = -X.
FieldClass classify_field(const VectorField& X, const VectorField& delta,
                          const VerifyOptions& opt);

// A grading vector field plus the functions it grades: base generators at
// degree 0, fiber generators at degree 1. Together the generators must form
// a coframe (numeric rank n), and delta must vanish exactly where all fiber
// generators do.
struct PartialLinearStructure {
  Chart chart;
  VectorField delta;
  std::vector<Expr> base_gens;
  std::vector<Expr> fiber_gens;
};

struct TangentStructure {
  PartialLinearStructure pls;
  Tensor11 s;
};

// Does Gamma move every base generator to an independent degree-1 function?
// Checks L_Delta(L_Gamma f) = L_Gamma f per generator plus full numeric rank
// of the stacked coframe {d f_i, d(L_Gamma f_i)}.
bool is_sode_algebraic(const VectorField& gamma, const BasicSubalgebra& A,
                       const VectorField& delta, const VerifyOptions& opt);

// S(Gamma) = Delta componentwise.
bool is_sode_tensorial(const VectorField& gamma, const TangentStructure& T,
                       const VerifyOptions& opt);

// The unique S with S*(d(L_gamma f_i)) = d f_i and S*(d f_i) = 0, from a
// symbolic linear solve in the stacked coframe; both defining families are
// re-verified before returning.
Tensor11 build_S_from_sode(const VectorField& gamma, const BasicSubalgebra& A,
                           const VerifyOptions& opt);

// Lift of a base field written against the base generators: components w_i
// (basic functions) ride the dual fiber directions, so in adapted
// coordinates the result is w_i d/dv_i.
VectorField vertical_lift(const PartialLinearStructure& P, const std::vector<Expr>& w,
                          const VerifyOptions& opt);

// Fiberwise linear function of a basic one-form a = a_i d(gen_i): returns
// sum fiber_i * a_i, the function whose Delta-degree is 1.
Expr hat_oneform(const PartialLinearStructure& P, const std::vector<Expr>& alpha,
                 const VerifyOptions& opt);

// Connection-style projector test: C idempotent and identity on the given
// vertical fields.
bool is_vertical_projector(const Tensor11& C, const std::vector<VectorField>& vertical,
                           const VerifyOptions& opt);

// The full check list, one report entry per axiom:
//   s-compose-zero, s-rank, nijenhuis-zero, lie-delta-s, s-delta-zero,
//   delta-grading, sode-exists.
StructureReport verify_tangent_structure(const TangentStructure& T, const VerifyOptions& opt);

}  // namespace bundlecheck::bundle
