#include "bundlecheck/geom/chart.hpp"

#include <set>

namespace bundlecheck::geom {

Chart::Chart(std::string n, std::vector<std::string> c)
    : name(std::move(n)), coords(std::move(c)) {
  if (coords.empty()) throw InvalidArgument("chart needs at least one coordinate");
  std::set<std::string> seen;
  for (const auto& s : coords) {
    if (s.empty()) throw InvalidArgument("empty coordinate name");
    if (!seen.insert(s).second)
      throw InvalidArgument("duplicate coordinate name: " + s);
  }
}

int Chart::index_of(const std::string& s) const {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == s) return static_cast<int>(i);
  return -1;
}

void require_same_chart(const Chart& a, const Chart& b, const char* what) {
  if (!(a == b))
    throw ChartMismatchError(std::string(what) + ": charts '" + a.name + "' and '" +
                             b.name + "' differ");
}

VectorField::VectorField(Chart c, std::vector<Expr> v)
    : chart(std::move(c)), comps(std::move(v)) {
  if (static_cast<int>(comps.size()) != chart.dim())
    throw InvalidArgument("vector field component count does not match chart dimension");
}

OneForm::OneForm(Chart c, std::vector<Expr> v) : chart(std::move(c)), comps(std::move(v)) {
  if (static_cast<int>(comps.size()) != chart.dim())
    throw InvalidArgument("one-form component count does not match chart dimension");
}

Tensor11::Tensor11(Chart c) : chart(std::move(c)) {
  comps.resize(static_cast<std::size_t>(chart.dim()) * chart.dim());
}

Tensor11::Tensor11(Chart c, std::vector<Expr> rowmajor)
    : chart(std::move(c)), comps(std::move(rowmajor)) {
  if (comps.size() != static_cast<std::size_t>(chart.dim()) * chart.dim())
    throw InvalidArgument("tensor component count does not match chart dimension");
}

TwoForm::TwoForm(Chart c) : chart(std::move(c)) {
  int n = chart.dim();
  upper.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
}

namespace {
std::size_t upper_index(int n, int i, int j) {
  // i < j assumed
  return static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}
}  // namespace

Expr TwoForm::comp(int i, int j) const {
  if (i == j) return Expr();
  int n = chart.dim();
  if (i < j) return upper[upper_index(n, i, j)];
  return -upper[upper_index(n, j, i)];
}

void TwoForm::set(int i, int j, const Expr& e) {
  if (i == j) {
    if (!e.is_zero()) throw InvalidArgument("diagonal entries of a 2-form must vanish");
    return;
  }
  int n = chart.dim();
  if (i < j)
    upper[upper_index(n, i, j)] = e;
  else
    upper[upper_index(n, j, i)] = -e;
}

bool VectorTwoForm::structurally_zero() const {
  for (const TwoForm& t : comps)
    for (const Expr& e : t.upper)
      if (!e.is_zero()) return false;
  return true;
}

}  // namespace bundlecheck::geom
