#pragma once

#include <string>
#include <vector>

#include "bundlecheck/errors.hpp"
#include "bundlecheck/sym/expr.hpp"

namespace bundlecheck::geom {

using sym::Expr;

// A named coordinate system: an ordered list of distinct symbol names.
struct Chart {
  std::string name;
  std::vector<std::string> coords;

  Chart() = default;
  Chart(std::string n, std::vector<std::string> c);

  int dim() const { return static_cast<int>(coords.size()); }
  int index_of(const std::string& s) const;
  Expr coord(int i) const { return Expr::symbol(coords[i]); }

  bool operator==(const Chart& o) const = default;
};

void require_same_chart(const Chart& a, const Chart& b, const char* what);

struct VectorField {
  Chart chart;
  std::vector<Expr> comps;  // X = comps[i] * d/dx_i

  VectorField() = default;
  VectorField(Chart c, std::vector<Expr> v);
  const Expr& operator[](int i) const { return comps[i]; }
};

struct OneForm {
  Chart chart;
  std::vector<Expr> comps;  // a = comps[i] * dx_i

  OneForm() = default;
  OneForm(Chart c, std::vector<Expr> v);
  const Expr& operator[](int i) const { return comps[i]; }
};

// (1,1)-tensor S^i_j d/dx_i (x) dx_j; row index i is the output slot, so
// (S X)^i = S^i_j X^j.
struct Tensor11 {
  Chart chart;
  std::vector<Expr> comps;  // row-major n*n

  Tensor11() = default;
  explicit Tensor11(Chart c);
  Tensor11(Chart c, std::vector<Expr> rowmajor);
  Expr& at(int i, int j) { return comps[static_cast<std::size_t>(i) * chart.dim() + j]; }
  const Expr& at(int i, int j) const {
    return comps[static_cast<std::size_t>(i) * chart.dim() + j];
  }
};

// Antisymmetric 2-form storing only i<j components:
//   w = sum_{i<j} comp(i,j) dx_i ^ dx_j,   comp(j,i) = -comp(i,j).
struct TwoForm {
  Chart chart;
  std::vector<Expr> upper;  // packed i<j

  TwoForm() = default;
  explicit TwoForm(Chart c);

  Expr comp(int i, int j) const;           // signed, zero on the diagonal
  void set(int i, int j, const Expr& e);   // stores e at (i,j), -e at (j,i)
};

// Vector-valued antisymmetric 2-tensor: component i is a TwoForm in the two
// lower slots (used for the torsion of a (1,1)-tensor).
struct VectorTwoForm {
  Chart chart;
  std::vector<TwoForm> comps;  // one per output index

  bool structurally_zero() const;
};

}  // namespace bundlecheck::geom
