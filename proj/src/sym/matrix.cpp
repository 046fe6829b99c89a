#include "bundlecheck/sym/matrix.hpp"

#include <algorithm>
#include <map>

namespace bundlecheck::sym {

ExprMatrix ExprMatrix::identity(int n) {
  ExprMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Expr(1);
  return m;
}

ExprMatrix mul(const ExprMatrix& x, const ExprMatrix& y) {
  if (x.cols != y.rows) throw InvalidArgument("matrix size mismatch");
  ExprMatrix r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < y.cols; ++j) {
      std::vector<Expr> terms;
      terms.reserve(x.cols);
      for (int k = 0; k < x.cols; ++k) terms.push_back(x.at(i, k) * y.at(k, j));
      r.at(i, j) = Expr::sum(std::move(terms));
    }
  return r;
}

ExprMatrix transpose(const ExprMatrix& x) {
  ExprMatrix r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

ZeroTester make_tester(ZeroOptions opt) {
  return [opt](const Expr& e) { return is_zero(e, opt); };
}

namespace {

ExprMatrix minor_matrix(const ExprMatrix& m, int drop_row, int drop_col) {
  ExprMatrix r(m.rows - 1, m.cols - 1);
  for (int i = 0, ri = 0; i < m.rows; ++i) {
    if (i == drop_row) continue;
    for (int j = 0, rj = 0; j < m.cols; ++j) {
      if (j == drop_col) continue;
      r.at(ri, rj) = m.at(i, j);
      ++rj;
    }
    ++ri;
  }
  return r;
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
  if (m.rows != m.cols) throw InvalidArgument("determinant of a non-square matrix");
  if (m.rows > 6) throw InvalidArgument("symbolic determinant limited to 6x6");
  if (m.rows == 0) return Expr(1);
  if (m.rows == 1) return m.at(0, 0);
  std::vector<Expr> terms;
  for (int j = 0; j < m.cols; ++j) {
    if (m.at(0, j).is_zero()) continue;
    Expr c = determinant(minor_matrix(m, 0, j));
    Expr t = m.at(0, j) * c;
    terms.push_back(j % 2 == 0 ? t : -t);
  }
  return Expr::sum(std::move(terms));
}

Expr pfaffian(const ExprMatrix& m) {
  if (m.rows != m.cols) throw InvalidArgument("pfaffian of a non-square matrix");
  if (m.rows % 2 != 0) throw InvalidArgument("pfaffian needs even dimension");
  if (m.rows == 0) return Expr(1);
  if (m.rows == 2) return m.at(0, 1);
  std::vector<Expr> terms;
  for (int j = 1; j < m.cols; ++j) {
    if (m.at(0, j).is_zero()) continue;
    ExprMatrix sub((m.rows - 2), (m.cols - 2));
    // remove rows/cols 0 and j
    for (int i = 0, ri = 0; i < m.rows; ++i) {
      if (i == 0 || i == j) continue;
      for (int k = 0, rk = 0; k < m.cols; ++k) {
        if (k == 0 || k == j) continue;
        sub.at(ri, rk) = m.at(i, k);
        ++rk;
      }
      ++ri;
    }
    Expr t = m.at(0, j) * pfaffian(sub);
    terms.push_back(j % 2 == 1 ? t : -t);
  }
  return Expr::sum(std::move(terms));
}

namespace {

// Returns the pivot row index >= start whose entry in `col` tests NonZero, or
// -1 when the column is structurally zero below start. Throws PivotError when
// only ProbablyZero candidates remain.
int pick_pivot(const ExprMatrix& m, int start, int col, const ZeroTester& tester) {
  int best = -1;
  std::size_t best_size = 0;
  bool saw_undecided = false;
  for (int r = start; r < m.rows; ++r) {
    const Expr& e = m.at(r, col);
    if (e.is_zero()) continue;
    switch (tester(e)) {
      case ZeroVerdict::Zero:
        continue;
      case ZeroVerdict::ProbablyZero:
        saw_undecided = true;
        continue;
      case ZeroVerdict::NonZero: {
        std::size_t sz = e.node_count();
        if (best < 0 || sz < best_size) {
          best = r;
          best_size = sz;
        }
      }
    }
  }
  if (best < 0 && saw_undecided)
    throw PivotError("pivot candidates are numerically indistinguishable from zero");
  return best;
}

struct Rref {
  ExprMatrix m;
  std::vector<int> pivot_cols;
};

Rref rref(ExprMatrix m, const ZeroTester& tester) {
  Rref out{std::move(m), {}};
  ExprMatrix& a = out.m;
  int row = 0;
  for (int col = 0; col < a.cols && row < a.rows; ++col) {
    int p = pick_pivot(a, row, col, tester);
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < a.cols; ++j) std::swap(a.at(p, j), a.at(row, j));
    Expr inv = Expr::pow(a.at(row, col), -1);
    for (int j = 0; j < a.cols; ++j) a.at(row, j) = a.at(row, j) * inv;
    a.at(row, col) = Expr(1);
    for (int r = 0; r < a.rows; ++r) {
      if (r == row || a.at(r, col).is_zero()) continue;
      Expr factor = a.at(r, col);
      for (int j = 0; j < a.cols; ++j)
        a.at(r, j) = a.at(r, j) - factor * a.at(row, j);
      a.at(r, col) = Expr();
    }
    out.pivot_cols.push_back(col);
    ++row;
  }
  return out;
}

// Multiplies every component by enough of each negatively-powered base to
// leave the vector denominator-free (when the bases are visible term-wise).
void clear_denominators(std::vector<Expr>& v) {
  for (int pass = 0; pass < 3; ++pass) {
    std::map<Expr, long long, ExprLess> need;
    auto scan_factor = [&need](const Expr& f) {
      if (f.kind() == Kind::Pow && f.node().expo < 0) {
        long long k = -f.node().expo;
        auto [it, fresh] = need.emplace(f.node().kids[0], k);
        if (!fresh) it->second = std::max(it->second, k);
      }
    };
    auto scan_term = [&](const Expr& t) {
      if (t.kind() == Kind::Product)
        for (const Expr& f : t.node().kids) scan_factor(f);
      else
        scan_factor(t);
    };
    for (const Expr& c : v) {
      if (c.kind() == Kind::Sum)
        for (const Expr& t : c.node().kids) scan_term(t);
      else
        scan_term(c);
    }
    if (need.empty()) return;
    Expr m(1);
    for (const auto& [base, k] : need) m = m * Expr::pow(base, k);
    for (Expr& c : v) c = c * m;
  }
}

}  // namespace

ExprMatrix solve(const ExprMatrix& A, const ExprMatrix& B, const ZeroTester& tester) {
  if (A.rows != A.cols) throw InvalidArgument("solve needs a square matrix");
  if (B.rows != A.rows) throw InvalidArgument("right-hand side size mismatch");
  ExprMatrix aug(A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) aug.at(i, A.cols + j) = B.at(i, j);
  }
  Rref r = rref(std::move(aug), tester);
  if (static_cast<int>(r.pivot_cols.size()) != A.cols || r.pivot_cols.back() >= A.cols)
    throw SingularError("matrix is singular");
  ExprMatrix x(A.cols, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < B.cols; ++j) x.at(i, j) = r.m.at(i, A.cols + j);
  return x;
}

ExprMatrix inverse(const ExprMatrix& A, const ZeroTester& tester) {
  if (A.rows != A.cols) throw InvalidArgument("inverse of a non-square matrix");
  const int n = A.rows;
  if (n == 1) {
    if (A.at(0, 0).is_zero()) throw SingularError("matrix is singular");
    ExprMatrix r(1, 1);
    r.at(0, 0) = Expr::pow(A.at(0, 0), -1);
    return r;
  }
  if (n == 2) {
    Expr det = A.at(0, 0) * A.at(1, 1) - A.at(0, 1) * A.at(1, 0);
    if (tester(det) != ZeroVerdict::NonZero) throw SingularError("matrix is singular");
    Expr inv = Expr::pow(det, -1);
    ExprMatrix r(2, 2);
    r.at(0, 0) = A.at(1, 1) * inv;
    r.at(0, 1) = -A.at(0, 1) * inv;
    r.at(1, 0) = -A.at(1, 0) * inv;
    r.at(1, 1) = A.at(0, 0) * inv;
    return r;
  }
  return solve(A, ExprMatrix::identity(n), tester);
}

std::vector<std::vector<Expr>> nullspace(const ExprMatrix& A, const ZeroTester& tester) {
  Rref r = rref(A, tester);
  std::vector<bool> is_pivot(A.cols, false);
  for (int c : r.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Expr>> basis;
  for (int free_col = 0; free_col < A.cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Expr> w(A.cols);
    w[free_col] = Expr(1);
    for (std::size_t k = 0; k < r.pivot_cols.size(); ++k)
      w[r.pivot_cols[k]] = -r.m.at(static_cast<int>(k), free_col);
    clear_denominators(w);
    basis.push_back(std::move(w));
  }
  return basis;
}

}  // namespace bundlecheck::sym
