#include "bundlecheck/sym/zerotest.hpp"

#include <cmath>
#include <random>

#include "bundlecheck/numcheck/sampling.hpp"

namespace bundlecheck::sym {

const char* zero_verdict_name(ZeroVerdict v) {
  switch (v) {
    case ZeroVerdict::Zero: return "zero";
    case ZeroVerdict::ProbablyZero: return "probably-zero";
    case ZeroVerdict::NonZero: return "nonzero";
  }
  return "?";
}

using numcheck::draw_coordinate;

ZeroWitness is_zero_detail(const Expr& e, const ZeroOptions& opt) {
  ZeroWitness w;
  if (e.is_zero()) {
    w.verdict = ZeroVerdict::Zero;
    return w;
  }
  if (e.is_constant()) {
    w.verdict = ZeroVerdict::NonZero;
    w.max_abs = std::abs(static_cast<double>(e.constant_value()));
    w.max_rel = w.max_abs / (1.0 + w.max_abs);
    return w;
  }

  Assignment a;
  a.opaques = opt.opaques;
  for (const auto& [name, order] : e.opaque_calls()) {
    (void)order;
    if (!a.opaques.count(name)) a.opaques.emplace(name, standard_family());
  }
  const std::set<std::string> syms = e.free_symbols();

  std::mt19937_64 rng(opt.seed);
  int done = 0;
  int attempts = 0;
  const int budget = numcheck::kResampleFactor * opt.trials;
  while (done < opt.trials) {
    if (attempts++ >= budget)
      throw EvalError("zero test kept leaving the evaluation domain");
    for (const std::string& s : syms) a.symbols[s] = draw_coordinate(rng, opt.lo, opt.hi);
    double value = 0.0, scale = 0.0;
    try {
      if (e.kind() == Kind::Sum) {
        for (const Expr& t : e.node().kids) {
          double tv = eval(t, a);
          value += tv;
          scale = std::max(scale, std::abs(tv));
        }
      } else {
        value = eval(e, a);
        scale = std::abs(value);
      }
      if (!std::isfinite(value)) throw EvalError("non-finite");
    } catch (const EvalError&) {
      continue;  // resample
    }
    ++done;
    double abs = std::abs(value);
    double rel = abs / (1.0 + scale);
    w.max_abs = std::max(w.max_abs, abs);
    w.max_rel = std::max(w.max_rel, rel);
    if (abs > opt.tolerance * (1.0 + scale)) {
      w.verdict = ZeroVerdict::NonZero;
      return w;
    }
  }
  w.verdict = ZeroVerdict::ProbablyZero;
  return w;
}

ZeroVerdict is_zero(const Expr& e, const ZeroOptions& opt) {
  return is_zero_detail(e, opt).verdict;
}

}  // namespace bundlecheck::sym
