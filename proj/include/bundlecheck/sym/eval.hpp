#pragma once

#include <functional>
#include <map>
#include <string>

#include "bundlecheck/sym/expr.hpp"

namespace bundlecheck::sym {

// Numeric realization of an opaque function symbol: maps (derivative order,
// argument) to a value. Order 0 is the function itself.
using OpaqueFn = std::function<double(int order, double u)>;
using OpaqueTable = std::map<std::string, OpaqueFn>;

// The built-in realization used when nothing else is declared:
//   f(u) = 1/(1 + u^2) + 2,
// with every derivative order computed in closed form. Smooth, bounded,
// nowhere zero, and non-polynomial, so it does not accidentally satisfy
// polynomial identities.
OpaqueFn standard_family();

// Realization of the inverse scale profile of u |-> f(|u|^2) u: returns g with
//   g(s) = 1 / f(t),  where t >= 0 solves f(t)^2 t = s.
// Requires s >= 0 and a scale map that is strictly increasing in t (true for
// the standard family). Derivative orders 0..2 are supported.
OpaqueFn radial_inverse_of(OpaqueFn f);

struct Assignment {
  std::map<std::string, double> symbols;
  OpaqueTable opaques;
};

// Evaluates an expression at an assignment. Throws EvalError when a symbol or
// opaque name is not covered, or when evaluation leaves a function's domain
// (log of a nonpositive value, negative sqrt, division by zero, overflow).
double eval(const Expr& e, const Assignment& a);

}  // namespace bundlecheck::sym
