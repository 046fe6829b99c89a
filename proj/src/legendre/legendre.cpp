#include "bundlecheck/legendre/legendre.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace bundlecheck::legendre {

namespace {

using sym::ZeroVerdict;

bool uses_only(const Expr& e, const std::vector<std::string>& allowed) {
  for (const auto& s : e.free_symbols())
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) return false;
  return true;
}

sym::ExprMatrix fiber_hessian(const Expr& L, const FiberedChart& tc) {
  const int r = tc.pairs();
  sym::ExprMatrix H(r, r);
  for (int j = 0; j < r; ++j) {
    Expr dj = L.diff(tc.fiber[j]);
    for (int k = 0; k < r; ++k) H.at(j, k) = dj.diff(tc.fiber[k]);
  }
  return H;
}

}  // namespace

FiberedChart::FiberedChart(Chart c, std::vector<std::string> b, std::vector<std::string> f)
    : chart(std::move(c)), base(std::move(b)), fiber(std::move(f)) {
  if (base.size() != fiber.size() || 2 * static_cast<int>(base.size()) != chart.dim())
    throw InvalidArgument("base and fiber blocks must split the chart " + chart.name + " evenly");
  for (const auto* block : {&base, &fiber})
    for (const auto& name : *block) (void)chart.index_of(name);
}

Metric::Metric(std::vector<std::string> b, sym::ExprMatrix m) : base(std::move(b)), g(std::move(m)) {
  const int r = static_cast<int>(base.size());
  if (g.rows != r || g.cols != r) throw InvalidArgument("metric matrix must match the base block");
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k) {
      if (!(g.at(j, k) - g.at(k, j)).is_zero())
        throw InvalidArgument("metric matrix must be symmetric");
      if (!uses_only(g.at(j, k), base))
        throw InvalidArgument("metric entries may use base symbols only: " + g.at(j, k).str());
    }
}

bool is_positive_definite(const Metric& m, const VerifyOptions& opt) {
  const int r = static_cast<int>(m.base.size());
  Chart base_chart("metric-base", m.base);
  auto points = numcheck::sample_points(base_chart, opt.domain);
  for (auto& a : points) {
    for (const Expr& e : m.g.a)
      for (const auto& [name, order] : e.opaque_calls()) {
        (void)order;
        if (!a.opaques.count(name)) a.opaques.emplace(name, sym::standard_family());
      }
    Eigen::MatrixXd num(r, r);
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) num(j, k) = sym::eval(m.g.at(j, k), a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(num);
    if (es.eigenvalues().minCoeff() <= 0.0) return false;
  }
  return true;
}

Expr geodesic_lagrangian(const Metric& m, const FiberedChart& tc) {
  if (m.base != tc.base)
    throw InvalidArgument("metric base block does not match the chart's base block");
  const int r = tc.pairs();
  Expr acc(0);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k)
      acc += m.g.at(j, k) * Expr::symbol(tc.fiber[j]) * Expr::symbol(tc.fiber[k]);
  return Expr::rational(1, 2) * acc;
}

bool is_hyperregular(const Expr& L, const FiberedChart& tc, const VerifyOptions& opt) {
  Expr det = sym::determinant(fiber_hessian(L, tc));
  return sym::is_zero(det, opt.zero()) == ZeroVerdict::NonZero;
}

LegendreMap fiber_derivative(const Expr& L, const FiberedChart& tc, const Chart& dual_chart,
                             const VerifyOptions& opt) {
  const int r = tc.pairs();
  if (dual_chart.dim() != tc.chart.dim())
    throw InvalidArgument("dual chart dimension mismatch");
  std::vector<std::string> dual_fiber;
  for (int i = 0; i < r; ++i) {
    if (dual_chart.coords[i] != tc.base[i])
      throw InvalidArgument("dual chart must start with the base block of " + tc.chart.name);
    dual_fiber.push_back(dual_chart.coords[r + i]);
  }
  FiberedChart dual(dual_chart, tc.base, dual_fiber);

  if (!is_hyperregular(L, tc, opt))
    throw InvalidArgument("Lagrangian has a degenerate fiber Hessian");

  sym::ExprMatrix H = fiber_hessian(L, tc);
  for (const Expr& e : H.a)
    if (!uses_only(e, tc.base))
      throw InvalidArgument(
          "automatic inversion needs a fiber-quadratic Lagrangian; supply the inverse "
          "explicitly otherwise");

  std::map<std::string, Expr> fiber_zero;
  for (const auto& v : tc.fiber) fiber_zero[v] = Expr(0);

  std::vector<Expr> forward;
  sym::ExprMatrix rhs(r, 1);
  for (int i = 0; i < r; ++i) forward.push_back(Expr::symbol(tc.base[i]));
  for (int k = 0; k < r; ++k) {
    Expr pk = L.diff(tc.fiber[k]);
    forward.push_back(pk);
    // affine fiber part: p_k at v = 0
    rhs.at(k, 0) = Expr::symbol(dual_fiber[k]) - pk.substitute(fiber_zero);
  }

  auto tester = sym::make_tester(opt.zero());
  sym::ExprMatrix v = sym::solve(H, rhs, tester);
  std::vector<Expr> inverse;
  for (int i = 0; i < r; ++i) inverse.push_back(Expr::symbol(tc.base[i]));
  for (int k = 0; k < r; ++k) inverse.push_back(v.at(k, 0));

  LegendreMap out{geom::CoordinateMap(tc.chart, dual_chart, std::move(forward), std::move(inverse)),
                  L, tc, dual};
  for (const Expr& res : geom::roundtrip_residuals(out.map))
    if (sym::is_zero(res, opt.zero()) == ZeroVerdict::NonZero)
      throw Error("fiber derivative failed its round-trip check: " + res.str());
  return out;
}

OneForm theta_g(const Expr& L, const FiberedChart& tc) {
  std::vector<Expr> comps(tc.chart.dim(), Expr(0));
  for (int k = 0; k < tc.pairs(); ++k)
    comps[tc.chart.index_of(tc.base[k])] = L.diff(tc.fiber[k]);
  return OneForm(tc.chart, std::move(comps));
}

CotangentStructure transport_theta(const LegendreMap& FL, const OneForm& theta,
                                   const VerifyOptions& opt) {
  geom::require_same_chart(theta.chart, FL.source.chart, "transport_theta");
  OneForm moved = geom::pullback(geom::inverted(FL.map), theta);

  std::vector<Expr> grading(FL.source.chart.dim(), Expr(0));
  for (const auto& v : FL.source.fiber)
    grading[FL.source.chart.index_of(v)] = Expr::symbol(v);
  VectorField delta = geom::pushforward(FL.map, VectorField(FL.source.chart, grading));

  return cotangent::make_structure(FL.target.chart, FL.target.base, FL.target.fiber,
                                   std::move(moved), std::move(delta), opt);
}

std::vector<Expr> theta_roundtrip_residuals(const LegendreMap& FL, const OneForm& theta,
                                            const CotangentStructure& C) {
  OneForm back = geom::pullback(FL.map, C.theta);
  std::vector<Expr> res;
  for (int i = 0; i < FL.source.chart.dim(); ++i)
    res.push_back(back.comps[i] - theta.comps[i]);
  return res;
}

Expr gauge_shift(const Expr& L, const Expr& F, const FiberedChart& tc, const VerifyOptions& opt) {
  (void)opt;
  if (!uses_only(F, tc.base))
    throw InvalidArgument("gauge term must be a base function: " + F.str());
  Expr acc(0);
  for (int i = 0; i < tc.pairs(); ++i)
    acc += Expr::symbol(tc.fiber[i]) * F.diff(tc.base[i]);
  return L + acc;
}

FoulingResult fouling_composition(const LegendreMap& FL1, const LegendreMap& FL2,
                                  const VerifyOptions& opt) {
  geom::require_same_chart(FL1.source.chart, FL2.source.chart, "fouling_composition");
  geom::CoordinateMap map = geom::composed(geom::inverted(FL1.map), FL2.map);

  auto canonical_on = [](const FiberedChart& fc) {
    std::vector<Expr> comps(fc.chart.dim(), Expr(0));
    for (int i = 0; i < fc.pairs(); ++i)
      comps[fc.chart.index_of(fc.base[i])] = Expr::symbol(fc.fiber[i]);
    return OneForm(fc.chart, comps);
  };
  OneForm pulled = geom::pullback(map, canonical_on(FL2.target));
  OneForm want = canonical_on(FL1.target);
  bool preserves = true;
  for (int i = 0; i < FL1.target.chart.dim(); ++i)
    if (sym::is_zero(pulled.comps[i] - want.comps[i], opt.zero()) == ZeroVerdict::NonZero)
      preserves = false;
  return FoulingResult{std::move(map), preserves};
}

}  // namespace bundlecheck::legendre
