#include "bundlecheck/bundle/bundle.hpp"

#include <algorithm>

namespace bundlecheck::bundle {

namespace {

using sym::ZeroVerdict;
using sym::ZeroWitness;

// Aggregates a family of residual expressions into one check entry: any
// nonzero witness fails, any unresolved component downgrades to
// probably-zero, all-structural stays an exact pass.
CheckResult symbolic_check(std::string id, const std::vector<Expr>& residuals,
                           const VerifyOptions& opt) {
  CheckResult out;
  out.id = std::move(id);
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    ZeroWitness w = sym::is_zero_detail(residuals[k], opt.zero());
    out.max_abs_residual = std::max(out.max_abs_residual, w.max_abs);
    out.max_rel_residual = std::max(out.max_rel_residual, w.max_rel);
    if (w.verdict == ZeroVerdict::NonZero) {
      out.verdict = Verdict::Fail;
      if (out.detail.empty())
        out.detail = "component " + std::to_string(k) + ": " + residuals[k].str();
    } else if (w.verdict == ZeroVerdict::ProbablyZero && out.verdict == Verdict::Pass) {
      out.verdict = Verdict::ProbablyZero;
    }
  }
  return out;
}

CheckResult numeric_check(std::string id, const numcheck::ResidualSummary& s,
                          std::string detail = {}) {
  CheckResult out;
  out.id = std::move(id);
  out.verdict = s.pass() ? Verdict::Pass : Verdict::Fail;
  out.max_abs_residual = s.max_abs;
  out.max_rel_residual = s.max_rel;
  out.detail = std::move(detail);
  return out;
}

bool all_zeroish(const std::vector<Expr>& residuals, const VerifyOptions& opt) {
  for (const Expr& e : residuals)
    if (sym::is_zero(e, opt.zero()) == ZeroVerdict::NonZero) return false;
  return true;
}

sym::ExprMatrix tensor_grid(const Tensor11& S) {
  const int n = S.chart.dim();
  sym::ExprMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = S.at(i, j);
  return m;
}

std::vector<Expr> tensor_entries(const Tensor11& S) { return S.comps; }

std::vector<Expr> form_entries(const geom::VectorTwoForm& N) {
  std::vector<Expr> out;
  for (const auto& w : N.comps)
    for (const auto& e : w.upper) out.push_back(e);
  return out;
}

}  // namespace

BasicSubalgebra::BasicSubalgebra(Chart c, std::vector<Expr> gens)
    : chart(std::move(c)), generators(std::move(gens)) {
  if (generators.empty()) throw InvalidArgument("a basic subalgebra needs at least one generator");
  if (rank() > chart.dim())
    throw InvalidArgument("more generators than chart dimensions on " + chart.name);
}

sym::ExprMatrix generator_jacobian(const BasicSubalgebra& A) {
  sym::ExprMatrix J(A.rank(), A.chart.dim());
  for (int i = 0; i < A.rank(); ++i)
    for (int j = 0; j < A.chart.dim(); ++j)
      J.at(i, j) = A.generators[i].diff(A.chart.coords[j]);
  return J;
}

numcheck::RankSweep independence_rank(const BasicSubalgebra& A, const VerifyOptions& opt) {
  return numcheck::numeric_rank(generator_jacobian(A), A.chart, opt.domain);
}

std::vector<VectorField> vertical_distribution(const BasicSubalgebra& A,
                                               const VerifyOptions& opt) {
  auto sweep = independence_rank(A, opt);
  if (sweep.min_rank != A.rank())
    throw InvalidArgument("generators of " + A.chart.name +
                          " are not independent on the sample domain");
  auto tester = sym::make_tester(opt.zero());
  auto kernel = sym::nullspace(generator_jacobian(A), tester);
  std::vector<VectorField> out;
  for (auto& w : kernel) {
    VectorField Y(A.chart, std::move(w));
    for (const Expr& f : A.generators) {
      Expr r = geom::lie_derivative(Y, f);
      if (sym::is_zero(r, opt.zero()) == ZeroVerdict::NonZero)
        throw Error("kernel field fails to annihilate a generator: " + r.str());
    }
    out.push_back(std::move(Y));
  }
  return out;
}

bool is_vertical(const VectorField& Y, const BasicSubalgebra& A, const VerifyOptions& opt) {
  geom::require_same_chart(Y.chart, A.chart, "is_vertical");
  std::vector<Expr> res;
  for (const Expr& f : A.generators) res.push_back(geom::lie_derivative(Y, f));
  return all_zeroish(res, opt);
}

Projectability projectability(const VectorField& Y, const BasicSubalgebra& A,
                              const VerifyOptions& opt) {
  geom::require_same_chart(Y.chart, A.chart, "projectability");
  Projectability out;
  out.vertical = true;
  out.projectable = true;
  for (const Expr& f : A.generators) {
    Expr a = geom::lie_derivative(Y, f);
    if (sym::is_zero(a, opt.zero()) == ZeroVerdict::NonZero) out.vertical = false;
    out.action.push_back(std::move(a));
  }
  auto vertical = vertical_distribution(A, opt);
  for (const Expr& a : out.action)
    for (const VectorField& V : vertical)
      if (sym::is_zero(geom::lie_derivative(V, a), opt.zero()) == ZeroVerdict::NonZero) {
        out.projectable = false;
        return out;
      }
  return out;
}

std::optional<int> degree(const Expr& g, const VectorField& delta, const VerifyOptions& opt) {
  Expr lg = geom::lie_derivative(delta, g);
  for (int k = 0; k <= 4; ++k) {
    if (sym::is_zero(lg - Expr(k) * g, opt.zero()) != ZeroVerdict::NonZero) return k;
  }
  return std::nullopt;
}

const char* field_class_name(FieldClass c) {
  switch (c) {
    case FieldClass::FiberwiseLinear: return "fiberwise-linear";
    case FieldClass::Translational: return "translational";
    case FieldClass::Neither: return "neither";
  }
  return "neither";
}

FieldClass classify_field(const VectorField& X, const VectorField& delta,
                          const VerifyOptions& opt) {
  geom::require_same_chart(X.chart, delta.chart, "classify_field");
  VectorField br = geom::lie_bracket(delta, X);
  if (all_zeroish(br.comps, opt)) return FieldClass::FiberwiseLinear;
  std::vector<Expr> tr;
  for (int i = 0; i < X.chart.dim(); ++i) tr.push_back(br.comps[i] + X.comps[i]);
  if (all_zeroish(tr, opt)) return FieldClass::Translational;
  return FieldClass::Neither;
}

namespace {

// Rows: the generator gradients, then the gradients of their Gamma-images.
sym::ExprMatrix stacked_coframe(const VectorField& gamma, const BasicSubalgebra& A) {
  const int r = A.rank();
  const int n = A.chart.dim();
  sym::ExprMatrix M(2 * r, n);
  for (int i = 0; i < r; ++i) {
    Expr lf = geom::lie_derivative(gamma, A.generators[i]);
    for (int j = 0; j < n; ++j) {
      M.at(i, j) = A.generators[i].diff(A.chart.coords[j]);
      M.at(r + i, j) = lf.diff(A.chart.coords[j]);
    }
  }
  return M;
}

}  // namespace

bool is_sode_algebraic(const VectorField& gamma, const BasicSubalgebra& A,
                       const VectorField& delta, const VerifyOptions& opt) {
  geom::require_same_chart(gamma.chart, A.chart, "is_sode_algebraic");
  geom::require_same_chart(delta.chart, A.chart, "is_sode_algebraic");
  for (const Expr& f : A.generators)
    if (sym::is_zero(geom::lie_derivative(delta, f), opt.zero()) == ZeroVerdict::NonZero)
      throw InvalidArgument("grading field moves a base generator: " + f.str());

  for (const Expr& f : A.generators) {
    Expr lf = geom::lie_derivative(gamma, f);
    Expr res = geom::lie_derivative(delta, lf) - lf;
    if (sym::is_zero(res, opt.zero()) == ZeroVerdict::NonZero) return false;
  }
  auto sweep = numcheck::numeric_rank(stacked_coframe(gamma, A), A.chart, opt.domain);
  return sweep.min_rank == 2 * A.rank();
}

bool is_sode_tensorial(const VectorField& gamma, const TangentStructure& T,
                       const VerifyOptions& opt) {
  geom::require_same_chart(gamma.chart, T.pls.chart, "is_sode_tensorial");
  VectorField img = geom::apply(T.s, gamma);
  std::vector<Expr> res;
  for (int i = 0; i < gamma.chart.dim(); ++i)
    res.push_back(img.comps[i] - T.pls.delta.comps[i]);
  return all_zeroish(res, opt);
}

Tensor11 build_S_from_sode(const VectorField& gamma, const BasicSubalgebra& A,
                           const VerifyOptions& opt) {
  geom::require_same_chart(gamma.chart, A.chart, "build_S_from_sode");
  const int r = A.rank();
  const int n = A.chart.dim();
  if (n != 2 * r)
    throw InvalidArgument("need dim = 2 * generators to build a structure tensor");

  sym::ExprMatrix M = stacked_coframe(gamma, A);
  auto sweep = numcheck::numeric_rank(M, A.chart, opt.domain);
  if (sweep.min_rank != n)
    throw InvalidArgument("coframe {d f, d(L_Gamma f)} is rank-deficient on the sample domain");

  sym::ExprMatrix B(n, n);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) B.at(r + i, j) = M.at(i, j);

  auto tester = sym::make_tester(opt.zero());
  sym::ExprMatrix S = sym::solve(M, B, tester);

  Tensor11 out(A.chart);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = S.at(i, j);

  // re-verify both defining families
  for (int i = 0; i < r; ++i) {
    Expr lf = geom::lie_derivative(gamma, A.generators[i]);
    geom::OneForm df_i = geom::differential(A.chart, A.generators[i]);
    geom::OneForm dlf = geom::differential(A.chart, lf);
    geom::OneForm back = geom::apply_dual(out, dlf);
    geom::OneForm killed = geom::apply_dual(out, df_i);
    for (int j = 0; j < n; ++j) {
      if (sym::is_zero(back.comps[j] - df_i.comps[j], opt.zero()) == ZeroVerdict::NonZero)
        throw Error("structure tensor misses S*(d L f) = d f");
      if (sym::is_zero(killed.comps[j], opt.zero()) == ZeroVerdict::NonZero)
        throw Error("structure tensor misses S*(d f) = 0");
    }
  }
  return out;
}

namespace {

// Columns of the inverse adapted-coframe Jacobian are the coordinate frame
// fields of (base_gens, fiber_gens); the fiber block carries the lift.
std::vector<VectorField> adapted_frame(const PartialLinearStructure& P,
                                       const VerifyOptions& opt) {
  const int n = P.chart.dim();
  const int r = static_cast<int>(P.base_gens.size());
  if (static_cast<int>(P.fiber_gens.size()) != r || n != 2 * r)
    throw InvalidArgument("adapted frame needs matching base/fiber generator counts");
  sym::ExprMatrix J(n, n);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) {
      J.at(i, j) = P.base_gens[i].diff(P.chart.coords[j]);
      J.at(r + i, j) = P.fiber_gens[i].diff(P.chart.coords[j]);
    }
  auto tester = sym::make_tester(opt.zero());
  sym::ExprMatrix Ji = sym::inverse(J, tester);
  std::vector<VectorField> frame;
  for (int a = 0; a < n; ++a) {
    std::vector<Expr> comps;
    for (int i = 0; i < n; ++i) comps.push_back(Ji.at(i, a));
    frame.emplace_back(P.chart, std::move(comps));
  }
  return frame;
}

void require_basic(const Expr& e, const BasicSubalgebra& A, const VerifyOptions& opt,
                   const char* what) {
  auto vertical = vertical_distribution(A, opt);
  for (const VectorField& V : vertical)
    if (sym::is_zero(geom::lie_derivative(V, e), opt.zero()) == ZeroVerdict::NonZero)
      throw InvalidArgument(std::string(what) + " must be a base function: " + e.str());
}

}  // namespace

VectorField vertical_lift(const PartialLinearStructure& P, const std::vector<Expr>& w,
                          const VerifyOptions& opt) {
  const int r = static_cast<int>(P.base_gens.size());
  if (static_cast<int>(w.size()) != r)
    throw InvalidArgument("lift components must match the base generators");
  BasicSubalgebra base(P.chart, P.base_gens);
  for (const Expr& c : w) require_basic(c, base, opt, "lift component");
  auto frame = adapted_frame(P, opt);
  std::vector<Expr> comps(P.chart.dim(), Expr(0));
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < P.chart.dim(); ++a) comps[a] = comps[a] + w[i] * frame[r + i].comps[a];
  return VectorField(P.chart, std::move(comps));
}

Expr hat_oneform(const PartialLinearStructure& P, const std::vector<Expr>& alpha,
                 const VerifyOptions& opt) {
  const int r = static_cast<int>(P.base_gens.size());
  if (static_cast<int>(alpha.size()) != r)
    throw InvalidArgument("one-form components must match the base generators");
  BasicSubalgebra base(P.chart, P.base_gens);
  for (const Expr& c : alpha) require_basic(c, base, opt, "one-form component");
  Expr out(0);
  for (int i = 0; i < r; ++i) out += P.fiber_gens[i] * alpha[i];
  return out;
}

bool is_vertical_projector(const Tensor11& C, const std::vector<VectorField>& vertical,
                           const VerifyOptions& opt) {
  Tensor11 CC = geom::compose(C, C);
  std::vector<Expr> res;
  for (int i = 0; i < C.chart.dim(); ++i)
    for (int j = 0; j < C.chart.dim(); ++j) res.push_back(CC.at(i, j) - C.at(i, j));
  for (const VectorField& Y : vertical) {
    VectorField img = geom::apply(C, Y);
    for (int i = 0; i < C.chart.dim(); ++i) res.push_back(img.comps[i] - Y.comps[i]);
  }
  return all_zeroish(res, opt);
}

StructureReport verify_tangent_structure(const TangentStructure& T, const VerifyOptions& opt) {
  const Chart& chart = T.pls.chart;
  const int n = chart.dim();
  if (n % 2 != 0) throw InvalidArgument("structure verification needs an even dimension");
  const int half = n / 2;
  StructureReport rep;

  rep.checks.push_back(
      symbolic_check("s-compose-zero", tensor_entries(geom::compose(T.s, T.s)), opt));

  {
    auto sweep = numcheck::numeric_rank(tensor_grid(T.s), chart, opt.domain);
    CheckResult c;
    c.id = "s-rank";
    c.verdict = (sweep.min_rank == half && sweep.max_rank == half) ? Verdict::Pass : Verdict::Fail;
    c.detail = "rank " + std::to_string(sweep.min_rank) +
               (sweep.max_rank != sweep.min_rank ? ".." + std::to_string(sweep.max_rank) : "") +
               " of expected " + std::to_string(half) + " at " + std::to_string(sweep.points) +
               " points";
    rep.checks.push_back(std::move(c));
  }

  rep.checks.push_back(symbolic_check("nijenhuis-zero", form_entries(geom::nijenhuis(T.s)), opt));

  {
    Tensor11 L = geom::lie_derivative(T.pls.delta, T.s);
    std::vector<Expr> res;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) res.push_back(L.at(i, j) + T.s.at(i, j));
    rep.checks.push_back(symbolic_check("lie-delta-s", res, opt));
  }

  rep.checks.push_back(
      symbolic_check("s-delta-zero", geom::apply(T.s, T.pls.delta).comps, opt));

  {
    std::vector<Expr> res;
    for (const Expr& f : T.pls.base_gens) res.push_back(geom::lie_derivative(T.pls.delta, f));
    for (const Expr& g : T.pls.fiber_gens)
      res.push_back(geom::lie_derivative(T.pls.delta, g) - g);
    CheckResult c = symbolic_check("delta-grading", res, opt);

    std::vector<Expr> all = T.pls.base_gens;
    all.insert(all.end(), T.pls.fiber_gens.begin(), T.pls.fiber_gens.end());
    BasicSubalgebra coords(chart, all);
    auto sweep = independence_rank(coords, opt);
    if (sweep.min_rank != n) {
      c.verdict = Verdict::Fail;
      c.detail = "generators fail to form a coframe (rank " + std::to_string(sweep.min_rank) +
                 " of " + std::to_string(n) + ")";
    }

    auto zero_set = numcheck::vanishing_on_zero_set(T.pls.fiber_gens, T.pls.delta.comps, chart,
                                                    opt.domain, opt.algebraic);
    c.max_abs_residual = std::max(c.max_abs_residual, zero_set.max_abs);
    c.max_rel_residual = std::max(c.max_rel_residual, zero_set.max_rel);
    if (!zero_set.pass()) {
      c.verdict = Verdict::Fail;
      if (c.detail.empty()) c.detail = "grading field fails to vanish on the zero section";
    }
    rep.checks.push_back(std::move(c));
  }

  rep.checks.push_back(numeric_check(
      "sode-exists",
      numcheck::pointwise_solvable(tensor_grid(T.s), T.pls.delta.comps, chart, opt.domain,
                                   opt.algebraic)));

  return rep;
}

}  // namespace bundlecheck::bundle
