#include "bundlecheck/geom/calculus.hpp"

namespace bundlecheck::geom {

using sym::Expr;

Expr lie_derivative(const VectorField& X, const Expr& g) {
  std::vector<Expr> terms;
  terms.reserve(X.chart.dim());
  for (int i = 0; i < X.chart.dim(); ++i)
    terms.push_back(X[i] * g.diff(X.chart.coords[i]));
  return Expr::sum(std::move(terms));
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  require_same_chart(X.chart, Y.chart, "lie_bracket");
  const int n = X.chart.dim();
  std::vector<Expr> out(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> terms;
    terms.reserve(2 * n);
    for (int j = 0; j < n; ++j) {
      terms.push_back(X[j] * Y[i].diff(X.chart.coords[j]));
      terms.push_back(-(Y[j] * X[i].diff(X.chart.coords[j])));
    }
    out[i] = Expr::sum(std::move(terms));
  }
  return {X.chart, std::move(out)};
}

OneForm lie_derivative(const VectorField& X, const OneForm& a) {
  require_same_chart(X.chart, a.chart, "lie_derivative");
  const int n = X.chart.dim();
  std::vector<Expr> out(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> terms;
    for (int j = 0; j < n; ++j) {
      terms.push_back(X[j] * a[i].diff(X.chart.coords[j]));
      terms.push_back(a[j] * X[j].diff(X.chart.coords[i]));
    }
    out[i] = Expr::sum(std::move(terms));
  }
  return {X.chart, std::move(out)};
}

Tensor11 lie_derivative(const VectorField& X, const Tensor11& S) {
  require_same_chart(X.chart, S.chart, "lie_derivative");
  const int n = X.chart.dim();
  Tensor11 out(X.chart);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (int k = 0; k < n; ++k) {
        terms.push_back(X[k] * S.at(i, j).diff(X.chart.coords[k]));
        terms.push_back(-(S.at(k, j) * X[i].diff(X.chart.coords[k])));
        terms.push_back(S.at(i, k) * X[k].diff(X.chart.coords[j]));
      }
      out.at(i, j) = Expr::sum(std::move(terms));
    }
  return out;
}

OneForm differential(const Chart& chart, const Expr& g) {
  std::vector<Expr> out(chart.dim());
  for (int i = 0; i < chart.dim(); ++i) out[i] = g.diff(chart.coords[i]);
  return {chart, std::move(out)};
}

TwoForm exterior_derivative(const OneForm& a) {
  TwoForm w(a.chart);
  const int n = a.chart.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      w.set(i, j, a[j].diff(a.chart.coords[i]) - a[i].diff(a.chart.coords[j]));
  return w;
}

OneForm interior_product(const VectorField& X, const TwoForm& w) {
  require_same_chart(X.chart, w.chart, "interior_product");
  const int n = X.chart.dim();
  std::vector<Expr> out(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Expr> terms;
    for (int i = 0; i < n; ++i) terms.push_back(X[i] * w.comp(i, j));
    out[j] = Expr::sum(std::move(terms));
  }
  return {X.chart, std::move(out)};
}

Expr apply(const TwoForm& w, const VectorField& X, const VectorField& Y) {
  require_same_chart(w.chart, X.chart, "two-form application");
  require_same_chart(w.chart, Y.chart, "two-form application");
  const int n = w.chart.dim();
  std::vector<Expr> terms;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      terms.push_back(w.comp(i, j) * (X[i] * Y[j] - X[j] * Y[i]));
  return Expr::sum(std::move(terms));
}

VectorField apply(const Tensor11& S, const VectorField& X) {
  require_same_chart(S.chart, X.chart, "tensor application");
  const int n = S.chart.dim();
  std::vector<Expr> out(n);
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> terms;
    for (int j = 0; j < n; ++j) terms.push_back(S.at(i, j) * X[j]);
    out[i] = Expr::sum(std::move(terms));
  }
  return {S.chart, std::move(out)};
}

OneForm apply_dual(const Tensor11& S, const OneForm& a) {
  require_same_chart(S.chart, a.chart, "dual tensor application");
  const int n = S.chart.dim();
  std::vector<Expr> out(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Expr> terms;
    for (int i = 0; i < n; ++i) terms.push_back(a[i] * S.at(i, j));
    out[j] = Expr::sum(std::move(terms));
  }
  return {S.chart, std::move(out)};
}

Tensor11 compose(const Tensor11& A, const Tensor11& B) {
  require_same_chart(A.chart, B.chart, "tensor composition");
  const int n = A.chart.dim();
  Tensor11 out(A.chart);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Expr> terms;
      for (int k = 0; k < n; ++k) terms.push_back(A.at(i, k) * B.at(k, j));
      out.at(i, j) = Expr::sum(std::move(terms));
    }
  return out;
}

VectorTwoForm nijenhuis(const Tensor11& S) {
  const int n = S.chart.dim();
  const auto& x = S.chart.coords;
  VectorTwoForm N{S.chart, {}};
  N.comps.reserve(n);
  for (int i = 0; i < n; ++i) {
    TwoForm Ni(S.chart);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        std::vector<Expr> terms;
        for (int m = 0; m < n; ++m) {
          terms.push_back(S.at(m, j) * S.at(i, k).diff(x[m]));
          terms.push_back(-(S.at(m, k) * S.at(i, j).diff(x[m])));
          terms.push_back(-(S.at(i, m) * (S.at(m, k).diff(x[j]) - S.at(m, j).diff(x[k]))));
        }
        Ni.set(j, k, Expr::sum(std::move(terms)));
      }
    N.comps.push_back(std::move(Ni));
  }
  return N;
}

sym::ExprMatrix full_grid(const TwoForm& w) {
  const int n = w.chart.dim();
  sym::ExprMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = w.comp(i, j);
  return m;
}

Expr wedge_top_power(const TwoForm& w) {
  const int n = w.chart.dim();
  if (n % 2 != 0)
    throw InvalidArgument("top wedge power needs an even-dimensional chart");
  sym::Rational fact(1);
  for (int k = 2; k <= n / 2; ++k) fact *= k;
  return Expr::constant(fact) * pfaffian(full_grid(w));
}

}  // namespace bundlecheck::geom
