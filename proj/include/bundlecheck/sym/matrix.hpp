#pragma once

#include <functional>
#include <vector>

#include "bundlecheck/sym/expr.hpp"
#include "bundlecheck/sym/zerotest.hpp"

namespace bundlecheck::sym {

struct ExprMatrix {
  int rows = 0, cols = 0;
  std::vector<Expr> a;  // row-major, default zeros

  ExprMatrix() = default;
  ExprMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
  static ExprMatrix identity(int n);

  Expr& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Expr& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

ExprMatrix mul(const ExprMatrix& x, const ExprMatrix& y);
ExprMatrix transpose(const ExprMatrix& x);

// Decides whether a pivot candidate is usable. Zero -> skip, NonZero -> use,
// ProbablyZero -> unusable (and a PivotError if nothing better exists).
using ZeroTester = std::function<ZeroVerdict(const Expr&)>;
ZeroTester make_tester(ZeroOptions opt = {});

// Exact cofactor expansion; meant for small matrices (throws above 6x6).
Expr determinant(const ExprMatrix& m);

// Pfaffian of an antisymmetric matrix given by its full component grid;
// even dimension required. determinant == pfaffian^2.
Expr pfaffian(const ExprMatrix& m);

// Solves A X = B for square A by Gauss-Jordan elimination with symbolic
// division. Throws SingularError / PivotError.
ExprMatrix solve(const ExprMatrix& A, const ExprMatrix& B, const ZeroTester& tester);

// inverse(A) = solve(A, I); 1x1 and 2x2 take the adjugate shortcut.
ExprMatrix inverse(const ExprMatrix& A, const ZeroTester& tester);

// Basis of { x : A x = 0 } with denominators cleared, so entries stay in the
// sub-ring generated by the matrix entries whenever clearing succeeds.
std::vector<std::vector<Expr>> nullspace(const ExprMatrix& A, const ZeroTester& tester);

}  // namespace bundlecheck::sym
