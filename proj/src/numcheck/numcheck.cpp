#include "bundlecheck/numcheck/numcheck.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bundlecheck/numcheck/sampling.hpp"

namespace bundlecheck::numcheck {

namespace {

void add_fallbacks(sym::Assignment& a, const Expr& e) {
  for (const auto& [name, order] : e.opaque_calls()) {
    (void)order;
    if (!a.opaques.count(name)) a.opaques.emplace(name, sym::standard_family());
  }
}

struct Sampler {
  const Chart& chart;
  const SampleDomain& dom;
  std::mt19937_64 rng;
  int attempts = 0;

  Sampler(const Chart& c, const SampleDomain& d) : chart(c), dom(d), rng(d.seed) {}

  void draw(sym::Assignment& a) {
    if (attempts++ >= kResampleFactor * dom.count)
      throw EvalError("sampling kept leaving the evaluation domain");
    for (const auto& name : chart.coords)
      a.symbols[name] = draw_coordinate(rng, dom.lo, dom.hi);
  }
};

// Value and largest-term magnitude in one pass; sums are evaluated termwise
// so near-cancellation is measured against the terms that cancelled.
std::pair<double, double> eval_scaled(const Expr& e, const sym::Assignment& a) {
  if (e.kind() == sym::Kind::Sum) {
    double value = 0.0, scale = 0.0;
    for (const Expr& t : e.node().kids) {
      double tv = sym::eval(t, a);
      value += tv;
      scale = std::max(scale, std::abs(tv));
    }
    if (!std::isfinite(value)) throw EvalError("non-finite sum");
    return {value, scale};
  }
  double v = sym::eval(e, a);
  return {v, std::abs(v)};
}

Eigen::MatrixXd eval_matrix(const sym::ExprMatrix& m, const sym::Assignment& a) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = sym::eval(m.at(i, j), a);
  return out;
}

Eigen::VectorXd eval_vector(const std::vector<Expr>& v, const sym::Assignment& a) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = sym::eval(v[i], a);
  return out;
}

sym::Assignment shifted(const sym::Assignment& base, const Chart& chart,
                        const Eigen::VectorXd& pt) {
  sym::Assignment out = base;
  for (int i = 0; i < chart.dim(); ++i) out.symbols[chart.coords[i]] = pt(i);
  return out;
}

}  // namespace

sym::ZeroOptions VerifyOptions::zero() const {
  sym::ZeroOptions z;
  z.trials = domain.count;
  z.tolerance = algebraic;
  z.seed = domain.seed;
  z.lo = domain.lo;
  z.hi = domain.hi;
  z.opaques = domain.opaques;
  return z;
}

void ResidualSummary::record(double abs, double scale) {
  max_abs = std::max(max_abs, abs);
  max_rel = std::max(max_rel, abs / (1.0 + scale));
  if (abs > tolerance * (1.0 + scale)) ++failures;
}

std::vector<sym::Assignment> sample_points(const Chart& chart, const SampleDomain& dom) {
  std::vector<sym::Assignment> pts;
  std::mt19937_64 rng(dom.seed);
  for (int k = 0; k < dom.count; ++k) {
    sym::Assignment a;
    a.opaques = dom.opaques;
    for (const auto& name : chart.coords)
      a.symbols[name] = draw_coordinate(rng, dom.lo, dom.hi);
    pts.push_back(std::move(a));
  }
  return pts;
}

ResidualSummary residual_sweep(const std::vector<Expr>& residuals, const Chart& chart,
                               const SampleDomain& dom, double tolerance) {
  ResidualSummary out;
  out.tolerance = tolerance;
  sym::Assignment a;
  a.opaques = dom.opaques;
  for (const Expr& e : residuals) add_fallbacks(a, e);

  Sampler s(chart, dom);
  while (out.points < dom.count) {
    s.draw(a);
    std::vector<std::pair<double, double>> vals;
    try {
      for (const Expr& e : residuals) {
        auto [v, scale] = eval_scaled(e, a);
        vals.emplace_back(std::abs(v), scale);
      }
    } catch (const EvalError&) {
      continue;
    }
    ++out.points;
    for (auto [abs, scale] : vals) out.record(abs, scale);
  }
  return out;
}

RankSweep numeric_rank(const sym::ExprMatrix& m, const Chart& chart, const SampleDomain& dom) {
  RankSweep out;
  sym::Assignment a;
  a.opaques = dom.opaques;
  for (const Expr& e : m.a) add_fallbacks(a, e);

  Sampler s(chart, dom);
  while (out.points < dom.count) {
    s.draw(a);
    Eigen::MatrixXd num;
    try {
      num = eval_matrix(m, a);
    } catch (const EvalError&) {
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(num);
    const auto& sv = svd.singularValues();
    int rank = 0;
    if (sv.size() > 0 && sv(0) > 0.0) {
      double cut = kRankTolFactor * sv(0);
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    }
    if (out.points == 0) {
      out.min_rank = out.max_rank = rank;
    } else {
      out.min_rank = std::min(out.min_rank, rank);
      out.max_rank = std::max(out.max_rank, rank);
    }
    ++out.points;
  }
  return out;
}

ResidualSummary vanishing_on_zero_set(const std::vector<Expr>& level, const std::vector<Expr>& values,
                                      const Chart& chart, const SampleDomain& dom,
                                      double tolerance) {
  const int n = chart.dim();
  const int r = static_cast<int>(level.size());
  sym::ExprMatrix grad(r, n);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < n; ++j) grad.at(i, j) = level[i].diff(chart.coords[j]);

  ResidualSummary out;
  out.tolerance = tolerance;
  sym::Assignment a;
  a.opaques = dom.opaques;
  for (const Expr& e : level) add_fallbacks(a, e);
  for (const Expr& e : values) add_fallbacks(a, e);

  Sampler s(chart, dom);
  while (out.points < dom.count) {
    s.draw(a);
    bool ok = false;
    try {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = a.symbols.at(chart.coords[i]);
      for (int iter = 0; iter < 40; ++iter) {
        for (int i = 0; i < n; ++i) a.symbols[chart.coords[i]] = x(i);
        Eigen::VectorXd g = eval_vector(level, a);
        if (g.lpNorm<Eigen::Infinity>() < 1e-12) {
          ok = true;
          break;
        }
        Eigen::MatrixXd J = eval_matrix(grad, a);
        Eigen::VectorXd step = J.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(g);
        x -= step;
      }
      if (ok) {
        Eigen::VectorXd v = eval_vector(values, a);
        ++out.points;
        for (Eigen::Index i = 0; i < v.size(); ++i) out.record(std::abs(v(i)), 0.0);
      }
    } catch (const EvalError&) {
      // redraw
    }
  }
  return out;
}

ResidualSummary pointwise_solvable(const sym::ExprMatrix& m, const std::vector<Expr>& rhs,
                                   const Chart& chart, const SampleDomain& dom,
                                   double tolerance) {
  ResidualSummary out;
  out.tolerance = tolerance;
  sym::Assignment a;
  a.opaques = dom.opaques;
  for (const Expr& e : m.a) add_fallbacks(a, e);
  for (const Expr& e : rhs) add_fallbacks(a, e);

  Sampler s(chart, dom);
  while (out.points < dom.count) {
    s.draw(a);
    Eigen::MatrixXd M;
    Eigen::VectorXd d;
    try {
      M = eval_matrix(m, a);
      d = eval_vector(rhs, a);
    } catch (const EvalError&) {
      continue;
    }
    Eigen::VectorXd xi = M.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(d);
    Eigen::VectorXd res = M * xi - d;
    ++out.points;
    out.record(res.lpNorm<Eigen::Infinity>(), d.lpNorm<Eigen::Infinity>());
  }
  return out;
}

namespace {

// Shared scaffolding for the three flow checks: draws a point, evaluates the
// field and its partials there, and hands the two Euler images to a callback.
struct FlowContext {
  Eigen::VectorXd x, plus, minus;  // base point and psi_{+-h}(x)
  Eigen::MatrixXd fwd, bwd;        // I + h DX, I - h DX at x
  sym::Assignment at_x, at_plus, at_minus;
};

template <typename Body>
ResidualSummary run_flow(const VectorField& X, const SampleDomain& dom, double h,
                         double tolerance, sym::Assignment proto, const Body& body) {
  const Chart& chart = X.chart;
  const int n = chart.dim();
  for (const Expr& c : X.comps) add_fallbacks(proto, c);

  sym::ExprMatrix dX(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) dX.at(j, i) = X.comps[j].diff(chart.coords[i]);

  ResidualSummary out;
  out.tolerance = tolerance;
  Sampler s(chart, dom);
  while (out.points < dom.count) {
    s.draw(proto);
    FlowContext ctx;
    try {
      ctx.x = Eigen::VectorXd(n);
      for (int i = 0; i < n; ++i) ctx.x(i) = proto.symbols.at(chart.coords[i]);
      Eigen::VectorXd vel = eval_vector(X.comps, proto);
      Eigen::MatrixXd jac = eval_matrix(dX, proto);
      ctx.plus = ctx.x + h * vel;
      ctx.minus = ctx.x - h * vel;
      ctx.fwd = Eigen::MatrixXd::Identity(n, n) + h * jac;
      ctx.bwd = Eigen::MatrixXd::Identity(n, n) - h * jac;
      ctx.at_x = proto;
      ctx.at_plus = shifted(proto, chart, ctx.plus);
      ctx.at_minus = shifted(proto, chart, ctx.minus);
      body(ctx, out);
    } catch (const EvalError&) {
      continue;
    }
    ++out.points;
  }
  return out;
}

}  // namespace

ResidualSummary flow_check(const VectorField& X, const Expr& g, const Expr& lie_sym,
                           const SampleDomain& dom, double h, double tolerance) {
  sym::Assignment proto;
  proto.opaques = dom.opaques;
  add_fallbacks(proto, g);
  add_fallbacks(proto, lie_sym);
  return run_flow(X, dom, h, tolerance, std::move(proto),
                  [&](const FlowContext& ctx, ResidualSummary& out) {
                    double fd =
                        (sym::eval(g, ctx.at_plus) - sym::eval(g, ctx.at_minus)) / (2.0 * h);
                    double sv = sym::eval(lie_sym, ctx.at_x);
                    out.record(std::abs(fd - sv), std::max(std::abs(fd), std::abs(sv)));
                  });
}

ResidualSummary flow_check(const VectorField& X, const OneForm& a, const OneForm& lie_sym,
                           const SampleDomain& dom, double h, double tolerance) {
  geom::require_same_chart(X.chart, a.chart, "flow_check");
  sym::Assignment proto;
  proto.opaques = dom.opaques;
  for (const Expr& c : a.comps) add_fallbacks(proto, c);
  for (const Expr& c : lie_sym.comps) add_fallbacks(proto, c);
  return run_flow(X, dom, h, tolerance, std::move(proto),
                  [&](const FlowContext& ctx, ResidualSummary& out) {
                    Eigen::VectorXd ap = eval_vector(a.comps, ctx.at_plus);
                    Eigen::VectorXd am = eval_vector(a.comps, ctx.at_minus);
                    Eigen::VectorXd pull_p = ctx.fwd.transpose() * ap;
                    Eigen::VectorXd pull_m = ctx.bwd.transpose() * am;
                    Eigen::VectorXd sv = eval_vector(lie_sym.comps, ctx.at_x);
                    for (Eigen::Index i = 0; i < sv.size(); ++i) {
                      double fd = (pull_p(i) - pull_m(i)) / (2.0 * h);
                      out.record(std::abs(fd - sv(i)),
                                 std::max(std::abs(fd), std::abs(sv(i))));
                    }
                  });
}

ResidualSummary flow_check(const VectorField& X, const Tensor11& S, const Tensor11& lie_sym,
                           const SampleDomain& dom, double h, double tolerance) {
  geom::require_same_chart(X.chart, S.chart, "flow_check");
  const int n = X.chart.dim();
  sym::ExprMatrix sm(n, n);
  sym::ExprMatrix lm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      sm.at(i, j) = S.at(i, j);
      lm.at(i, j) = lie_sym.at(i, j);
    }
  sym::Assignment proto;
  proto.opaques = dom.opaques;
  for (const Expr& c : sm.a) add_fallbacks(proto, c);
  for (const Expr& c : lm.a) add_fallbacks(proto, c);
  return run_flow(X, dom, h, tolerance, std::move(proto),
                  [&](const FlowContext& ctx, ResidualSummary& out) {
                    Eigen::MatrixXd sp = eval_matrix(sm, ctx.at_plus);
                    Eigen::MatrixXd smi = eval_matrix(sm, ctx.at_minus);
                    Eigen::MatrixXd pull_p = ctx.fwd.inverse() * sp * ctx.fwd;
                    Eigen::MatrixXd pull_m = ctx.bwd.inverse() * smi * ctx.bwd;
                    Eigen::MatrixXd sv = eval_matrix(lm, ctx.at_x);
                    for (int i = 0; i < sv.rows(); ++i)
                      for (int j = 0; j < sv.cols(); ++j) {
                        double fd = (pull_p(i, j) - pull_m(i, j)) / (2.0 * h);
                        out.record(std::abs(fd - sv(i, j)),
                                   std::max(std::abs(fd), std::abs(sv(i, j))));
                      }
                  });
}

}  // namespace bundlecheck::numcheck
