#pragma once

#include <string>

#include "bundlecheck/sym/expr.hpp"

namespace bundlecheck::sym {

// Parses infix expression text:
//   operators + - * / ^ with the usual precedence, ^ binding tightest and
//   requiring an integer constant exponent; integer literals (rationals are
//   written with /); parentheses; sin/cos/exp/log/sqrt calls; any other
//   identifier followed by ( is an opaque unary function, with derivative
//   order given by trailing apostrophes (f''(x) has order 2); any other bare
//   identifier is a symbol.
// Throws ParseError with a byte offset on malformed input.
Expr parse(const std::string& text);

}  // namespace bundlecheck::sym
