#include "bundlecheck/cotangent/cotangent.hpp"

#include <algorithm>

namespace bundlecheck::cotangent {

namespace {

using sym::ZeroVerdict;
using sym::ZeroWitness;

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

void check_blocks(const Chart& chart, const std::vector<std::string>& base,
                  const std::vector<std::string>& fiber) {
  if (base.size() != fiber.size() || 2 * static_cast<int>(base.size()) != chart.dim())
    throw InvalidArgument("base and dual blocks must split the chart " + chart.name + " evenly");
  for (const auto& lists : {&base, &fiber})
    for (const auto& name : *lists) (void)chart.index_of(name);
}

}  // namespace

bundle::BasicSubalgebra CotangentStructure::base_subalgebra() const {
  std::vector<Expr> gens;
  for (const auto& name : base) gens.push_back(Expr::symbol(name));
  return bundle::BasicSubalgebra(chart, gens);
}

CotangentStructure canonical_structure(const Chart& chart, std::vector<std::string> base,
                                       std::vector<std::string> fiber) {
  check_blocks(chart, base, fiber);
  const int n = chart.dim();
  std::vector<Expr> th(n, Expr(0));
  std::vector<Expr> dl(n, Expr(0));
  for (std::size_t i = 0; i < base.size(); ++i) {
    th[chart.index_of(base[i])] = Expr::symbol(fiber[i]);
    dl[chart.index_of(fiber[i])] = Expr::symbol(fiber[i]);
  }
  CotangentStructure out;
  out.chart = chart;
  out.base = std::move(base);
  out.fiber = std::move(fiber);
  out.theta = OneForm(chart, std::move(th));
  out.omega = geom::exterior_derivative(out.theta);
  for (Expr& e : out.omega.upper) e = -e;
  out.delta = VectorField(chart, std::move(dl));
  return out;
}

CotangentStructure make_structure(const Chart& chart, std::vector<std::string> base,
                                  std::vector<std::string> fiber, OneForm theta,
                                  std::optional<VectorField> delta, const VerifyOptions& opt) {
  check_blocks(chart, base, fiber);
  geom::require_same_chart(chart, theta.chart, "make_structure");
  CotangentStructure out;
  out.chart = chart;
  out.base = std::move(base);
  out.fiber = std::move(fiber);
  out.theta = std::move(theta);
  out.omega = geom::exterior_derivative(out.theta);
  for (Expr& e : out.omega.upper) e = -e;
  out.delta = delta ? std::move(*delta) : liouville_from_theta(out.theta, opt);
  return out;
}

VectorField liouville_from_theta(const OneForm& theta, const VerifyOptions& opt) {
  const Chart& chart = theta.chart;
  const int n = chart.dim();
  TwoForm dtheta = geom::exterior_derivative(theta);
  // (i_Delta dtheta)_j = Delta^i (dtheta)_ij = theta_j: transpose-solve.
  sym::ExprMatrix A = transpose(geom::full_grid(dtheta));
  sym::ExprMatrix b(n, 1);
  for (int j = 0; j < n; ++j) b.at(j, 0) = theta.comps[j];
  auto tester = sym::make_tester(opt.zero());
  sym::ExprMatrix x = sym::solve(A, b, tester);
  std::vector<Expr> comps;
  for (int i = 0; i < n; ++i) comps.push_back(x.at(i, 0));
  VectorField delta(chart, std::move(comps));
  OneForm back = geom::interior_product(delta, dtheta);
  for (int j = 0; j < n; ++j)
    if (sym::is_zero(back.comps[j] - theta.comps[j], opt.zero()) == ZeroVerdict::NonZero)
      throw Error("recovered grading field fails i_Delta d(theta) = theta");
  return delta;
}

StructureReport verify_cotangent_structure(const CotangentStructure& C, const VerifyOptions& opt) {
  const Chart& chart = C.chart;
  if (chart.dim() % 2 != 0) throw InvalidArgument("cotangent verification needs an even dimension");
  StructureReport rep;

  auto vertical = bundle::vertical_distribution(C.base_subalgebra(), opt);

  {
    std::vector<Expr> res;
    for (const VectorField& V : vertical) {
      Expr pairing(0);
      for (int i = 0; i < chart.dim(); ++i) pairing += C.theta.comps[i] * V.comps[i];
      res.push_back(pairing);
    }
    rep.checks.push_back(symbolic_check("semibasic", res, opt));
  }

  {
    Expr top = geom::wedge_top_power(C.omega);
    ZeroWitness w = sym::is_zero_detail(top, opt.zero());
    CheckResult c;
    c.id = "omega-rank";
    c.verdict = (w.verdict == ZeroVerdict::NonZero) ? Verdict::Pass : Verdict::Fail;
    c.detail = "top wedge coefficient " + top.str();
    rep.checks.push_back(std::move(c));
  }

  {
    CheckResult c;
    c.id = "omega-closed";
    c.detail = "exact by construction";
    rep.checks.push_back(std::move(c));
  }

  {
    std::vector<Expr> res;
    for (std::size_t i = 0; i < vertical.size(); ++i)
      for (std::size_t j = i + 1; j < vertical.size(); ++j)
        res.push_back(geom::apply(C.omega, vertical[i], vertical[j]));
    rep.checks.push_back(symbolic_check("vertical-lagrangian", res, opt));
  }

  {
    TwoForm dtheta = geom::exterior_derivative(C.theta);
    OneForm idd = geom::interior_product(C.delta, dtheta);
    std::vector<Expr> res;
    for (int j = 0; j < chart.dim(); ++j) res.push_back(idd.comps[j] - C.theta.comps[j]);
    rep.checks.push_back(symbolic_check("delta-compat", res, opt));
  }

  {
    Expr pairing(0);
    for (int i = 0; i < chart.dim(); ++i) pairing += C.theta.comps[i] * C.delta.comps[i];
    rep.checks.push_back(symbolic_check("theta-kernel", {pairing}, opt));
  }

  return rep;
}

PoissonBivector poisson_from_omega(const TwoForm& omega, const VerifyOptions& opt) {
  const int n = omega.chart.dim();
  sym::ExprMatrix W = geom::full_grid(omega);
  auto tester = sym::make_tester(opt.zero());
  PoissonBivector L{omega.chart, sym::inverse(transpose(W), tester)};
  sym::ExprMatrix probe = mul(W, transpose(L.comps));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Expr want = (i == j) ? Expr(1) : Expr(0);
      if (sym::is_zero(probe.at(i, j) - want, opt.zero()) == ZeroVerdict::NonZero)
        throw Error("bivector inversion failed its residual check");
    }
  return L;
}

VectorField hamiltonian_field(const Expr& H, const PoissonBivector& L) {
  const Chart& chart = L.chart;
  std::vector<Expr> comps(chart.dim(), Expr(0));
  for (int i = 0; i < chart.dim(); ++i) {
    Expr acc(0);
    for (int j = 0; j < chart.dim(); ++j) acc += L.comps.at(i, j) * H.diff(chart.coords[j]);
    comps[i] = acc;
  }
  return VectorField(chart, std::move(comps));
}

VectorField hamiltonian_field(const Expr& H, const TwoForm& omega, const VerifyOptions& opt) {
  VectorField gamma = hamiltonian_field(H, poisson_from_omega(omega, opt));
  OneForm contracted = geom::interior_product(gamma, omega);
  OneForm dH = geom::differential(omega.chart, H);
  for (int j = 0; j < omega.chart.dim(); ++j)
    if (sym::is_zero(contracted.comps[j] - dH.comps[j], opt.zero()) == ZeroVerdict::NonZero)
      throw Error("field fails i_Gamma omega = dH");
  return gamma;
}

Expr poisson_bracket(const Expr& f, const Expr& g, const PoissonBivector& L) {
  const Chart& chart = L.chart;
  Expr acc(0);
  for (int i = 0; i < chart.dim(); ++i)
    for (int j = 0; j < chart.dim(); ++j)
      acc += L.comps.at(i, j) * f.diff(chart.coords[i]) * g.diff(chart.coords[j]);
  return acc;
}

std::vector<Expr> jacobi_residuals(const PoissonBivector& L) {
  const Chart& chart = L.chart;
  const int n = chart.dim();
  std::vector<Expr> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Expr acc(0);
        for (int m = 0; m < n; ++m) {
          acc += L.comps.at(i, m) * L.comps.at(j, k).diff(chart.coords[m]);
          acc += L.comps.at(j, m) * L.comps.at(k, i).diff(chart.coords[m]);
          acc += L.comps.at(k, m) * L.comps.at(i, j).diff(chart.coords[m]);
        }
        out.push_back(acc);
      }
  if (out.empty()) out.push_back(Expr(0));  // dim 2: identity is vacuous
  return out;
}

AlternativeDescription alternative_hamiltonian_description(const geom::CoordinateMap& phi,
                                                           const PoissonBivector& L,
                                                           const Expr& H,
                                                           const VerifyOptions& opt) {
  geom::require_same_chart(phi.source, L.chart, "alternative_hamiltonian_description");
  const int n = phi.target.dim();
  sym::ExprMatrix J = geom::jacobian(phi);
  auto to_target = geom::substitution_to_target(phi);

  sym::ExprMatrix pushed(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Expr acc(0);
      for (int i = 0; i < phi.source.dim(); ++i)
        for (int j = 0; j < phi.source.dim(); ++j)
          acc += J.at(a, i) * J.at(b, j) * L.comps.at(i, j);
      pushed.at(a, b) = acc.substitute(to_target);
    }

  AlternativeDescription out{{phi.target, std::move(pushed)},
                             geom::pushforward_function(phi, H),
                             VectorField(),
                             true};
  out.field = hamiltonian_field(out.hamiltonian, out.bivector);
  VectorField expected = geom::pushforward(phi, hamiltonian_field(H, L));
  for (int a = 0; a < n; ++a)
    if (sym::is_zero(out.field.comps[a] - expected.comps[a], opt.zero()) == ZeroVerdict::NonZero)
      out.matches = false;
  return out;
}

Expr hat_vectorfield(const CotangentStructure& C, const std::vector<Expr>& comps,
                     const VerifyOptions& opt) {
  if (comps.size() != C.base.size())
    throw InvalidArgument("field components must match the base block");
  auto base = C.base_subalgebra();
  auto vertical = bundle::vertical_distribution(base, opt);
  for (const Expr& c : comps)
    for (const VectorField& V : vertical)
      if (sym::is_zero(geom::lie_derivative(V, c), opt.zero()) == ZeroVerdict::NonZero)
        throw InvalidArgument("field component must be a base function: " + c.str());
  Expr out(0);
  for (std::size_t i = 0; i < comps.size(); ++i)
    out += Expr::symbol(C.fiber[i]) * comps[i];
  return out;
}

}  // namespace bundlecheck::cotangent
