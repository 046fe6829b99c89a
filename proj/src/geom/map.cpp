#include "bundlecheck/geom/map.hpp"

#include "bundlecheck/errors.hpp"

namespace bundlecheck::geom {

CoordinateMap::CoordinateMap(Chart src, Chart tgt, std::vector<Expr> fwd,
                             std::optional<std::vector<Expr>> inv)
    : source(std::move(src)),
      target(std::move(tgt)),
      forward(std::move(fwd)),
      inverse(std::move(inv)) {
  if (static_cast<int>(forward.size()) != target.dim())
    throw InvalidArgument("map " + source.name + " -> " + target.name + " needs " +
                          std::to_string(target.dim()) + " forward components");
  if (inverse && static_cast<int>(inverse->size()) != source.dim())
    throw InvalidArgument("inverse of " + source.name + " -> " + target.name + " needs " +
                          std::to_string(source.dim()) + " components");
}

CoordinateMap identity_map(const Chart& c) {
  std::vector<Expr> comps;
  for (const auto& name : c.coords) comps.push_back(Expr::symbol(name));
  return CoordinateMap(c, c, comps, comps);
}

CoordinateMap inverted(const CoordinateMap& m) {
  if (!m.inverse) throw InvalidArgument("map " + m.source.name + " -> " + m.target.name + " has no inverse");
  return CoordinateMap(m.target, m.source, *m.inverse, m.forward);
}

std::map<std::string, Expr> substitution_to_source(const CoordinateMap& m) {
  std::map<std::string, Expr> sub;
  for (int a = 0; a < m.target.dim(); ++a) sub[m.target.coords[a]] = m.forward[a];
  return sub;
}

std::map<std::string, Expr> substitution_to_target(const CoordinateMap& m) {
  if (!m.inverse) throw InvalidArgument("map " + m.source.name + " -> " + m.target.name + " has no inverse");
  std::map<std::string, Expr> sub;
  for (int i = 0; i < m.source.dim(); ++i) sub[m.source.coords[i]] = (*m.inverse)[i];
  return sub;
}

CoordinateMap composed(const CoordinateMap& first, const CoordinateMap& second) {
  if (!(first.target == second.source))
    throw ChartMismatchError("cannot compose: " + first.target.name + " vs " + second.source.name);
  auto mid = substitution_to_source(first);  // second.source syms -> exprs in first.source
  std::vector<Expr> fwd;
  for (const auto& comp : second.forward) fwd.push_back(comp.substitute(mid));
  std::optional<std::vector<Expr>> inv;
  if (first.inverse && second.inverse) {
    // first.inverse o second.inverse, written in second.target coordinates
    std::map<std::string, Expr> mid_inv;
    for (int a = 0; a < first.target.dim(); ++a)
      mid_inv[first.target.coords[a]] = (*second.inverse)[a];
    std::vector<Expr> comps;
    for (const auto& comp : *first.inverse) comps.push_back(comp.substitute(mid_inv));
    inv = std::move(comps);
  }
  return CoordinateMap(first.source, second.target, std::move(fwd), std::move(inv));
}

sym::ExprMatrix jacobian(const CoordinateMap& m) {
  sym::ExprMatrix J(m.target.dim(), m.source.dim());
  for (int a = 0; a < m.target.dim(); ++a)
    for (int i = 0; i < m.source.dim(); ++i)
      J.at(a, i) = m.forward[a].diff(m.source.coords[i]);
  return J;
}

Expr pullback_function(const CoordinateMap& m, const Expr& g) {
  return g.substitute(substitution_to_source(m));
}

Expr pushforward_function(const CoordinateMap& m, const Expr& g) {
  return g.substitute(substitution_to_target(m));
}

VectorField pushforward(const CoordinateMap& m, const VectorField& X) {
  require_same_chart(m.source, X.chart, "pushforward");
  auto J = jacobian(m);
  auto to_target = substitution_to_target(m);
  std::vector<Expr> comps(m.target.dim(), Expr(0));
  for (int a = 0; a < m.target.dim(); ++a) {
    Expr acc(0);
    for (int i = 0; i < m.source.dim(); ++i) acc += J.at(a, i) * X.comps[i];
    comps[a] = acc.substitute(to_target);
  }
  return VectorField(m.target, std::move(comps));
}

OneForm pullback(const CoordinateMap& m, const OneForm& a) {
  require_same_chart(m.target, a.chart, "pullback");
  auto J = jacobian(m);
  auto to_source = substitution_to_source(m);
  std::vector<Expr> comps(m.source.dim(), Expr(0));
  for (int i = 0; i < m.source.dim(); ++i) {
    Expr acc(0);
    for (int b = 0; b < m.target.dim(); ++b)
      acc += a.comps[b].substitute(to_source) * J.at(b, i);
    comps[i] = acc;
  }
  return OneForm(m.source, std::move(comps));
}

std::vector<Expr> pushforward_residuals(const CoordinateMap& m, const VectorField& X,
                                        const VectorField& Y) {
  require_same_chart(m.source, X.chart, "pushforward_residuals");
  require_same_chart(m.target, Y.chart, "pushforward_residuals");
  auto J = jacobian(m);
  auto to_source = substitution_to_source(m);
  std::vector<Expr> res(m.target.dim(), Expr(0));
  for (int a = 0; a < m.target.dim(); ++a) {
    Expr acc(0);
    for (int i = 0; i < m.source.dim(); ++i) acc += J.at(a, i) * X.comps[i];
    res[a] = acc - Y.comps[a].substitute(to_source);
  }
  return res;
}

std::vector<Expr> roundtrip_residuals(const CoordinateMap& m) {
  if (!m.inverse) throw InvalidArgument("roundtrip_residuals needs an inverse");
  std::vector<Expr> res;
  auto to_source = substitution_to_source(m);
  for (int i = 0; i < m.source.dim(); ++i)
    res.push_back((*m.inverse)[i].substitute(to_source) - Expr::symbol(m.source.coords[i]));
  auto to_target = substitution_to_target(m);
  for (int a = 0; a < m.target.dim(); ++a)
    res.push_back(m.forward[a].substitute(to_target) - Expr::symbol(m.target.coords[a]));
  return res;
}

}  // namespace bundlecheck::geom
