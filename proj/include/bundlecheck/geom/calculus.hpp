#pragma once

#include "bundlecheck/geom/chart.hpp"
#include "bundlecheck/sym/matrix.hpp"

namespace bundlecheck::geom {

// L_X g = X^i d_i g
Expr lie_derivative(const VectorField& X, const Expr& g);

// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// (L_X a)_i = X^j d_j a_i + a_j d_i X^j
OneForm lie_derivative(const VectorField& X, const OneForm& a);

// (L_X S)^i_j = X^k d_k S^i_j - S^k_j d_k X^i + S^i_k d_j X^k
Tensor11 lie_derivative(const VectorField& X, const Tensor11& S);

// (d g)_i = d_i g
OneForm differential(const Chart& chart, const Expr& g);

// (d a)_ij = d_i a_j - d_j a_i
TwoForm exterior_derivative(const OneForm& a);

// (i_X w)_j = X^i w_ij
OneForm interior_product(const VectorField& X, const TwoForm& w);

// w(X,Y) = w_ij X^i Y^j over the full antisymmetric grid
Expr apply(const TwoForm& w, const VectorField& X, const VectorField& Y);

// (S X)^i = S^i_j X^j
VectorField apply(const Tensor11& S, const VectorField& X);

// (S^* a)_j = a_i S^i_j
OneForm apply_dual(const Tensor11& S, const OneForm& a);

// (A B)^i_j = A^i_k B^k_j
Tensor11 compose(const Tensor11& A, const Tensor11& B);

// Torsion of S:
// N^i_jk = S^m_j d_m S^i_k - S^m_k d_m S^i_j - S^i_m (d_j S^m_k - d_k S^m_j)
VectorTwoForm nijenhuis(const Tensor11& S);

// Full antisymmetric component grid of a 2-form.
sym::ExprMatrix full_grid(const TwoForm& w);

// Coefficient of the top wedge power w^m relative to dx_1 ^ ... ^ dx_2m,
// namely m! * pfaffian(grid). Even chart dimension required.
Expr wedge_top_power(const TwoForm& w);

}  // namespace bundlecheck::geom
