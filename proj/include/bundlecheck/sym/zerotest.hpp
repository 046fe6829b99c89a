#pragma once

#include <cstdint>

#include "bundlecheck/numcheck/tolerances.hpp"
#include "bundlecheck/sym/eval.hpp"
#include "bundlecheck/sym/expr.hpp"

namespace bundlecheck::sym {

// Zero (structural), NonZero (witnessed numerically), or ProbablyZero: every
// sampled evaluation vanished but the normal form did not. Callers treat
// ProbablyZero as a pass with a warning.
enum class ZeroVerdict { Zero, ProbablyZero, NonZero };

const char* zero_verdict_name(ZeroVerdict v);

struct ZeroOptions {
  int trials = numcheck::kDefaultSampleCount;
  double tolerance = numcheck::kAlgebraicTol;
  std::uint64_t seed = numcheck::kDefaultSeed;
  double lo = numcheck::kSampleLo;  // |coordinate| window, both signs drawn
  double hi = numcheck::kSampleHi;
  OpaqueTable opaques;  // names not present fall back to standard_family()
};

// Structural test first (the normal form is the constant 0), then random
// evaluation: symbols drawn uniformly with |x| in [lo, hi], opaque symbols
// realized from `opaques` or the standard family. Any point with
// |value| > tolerance * (1 + scale) is a nonzero witness, where scale is the
// largest term magnitude at that point. Domain errors are resampled with a
// budget of kResampleFactor * trials attempts; exhausting it throws EvalError.
ZeroVerdict is_zero(const Expr& e, const ZeroOptions& opt = {});

// Largest absolute / relative residual seen while sampling (the relative
// value uses the same scale as above). Populated by is_zero_detail.
struct ZeroWitness {
  ZeroVerdict verdict = ZeroVerdict::ProbablyZero;
  double max_abs = 0.0;
  double max_rel = 0.0;
};

ZeroWitness is_zero_detail(const Expr& e, const ZeroOptions& opt = {});

}  // namespace bundlecheck::sym
