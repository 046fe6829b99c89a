#pragma once

#include <stdexcept>
#include <string>

namespace bundlecheck {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed expression or spec-file text. `offset` is a byte offset into the
// input where the problem was detected.
struct ParseError : Error {
  std::size_t offset;
  ParseError(std::size_t off, const std::string& what)
      : Error(what + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

// Numeric evaluation left the function's domain (log of a nonpositive value,
// division by zero, ...) or an assignment was incomplete.
struct EvalError : Error {
  using Error::Error;
};

// Objects from different charts were combined.
struct ChartMismatchError : Error {
  using Error::Error;
};

// Symbolic linear algebra could not find a usable pivot: every candidate was
// either zero or numerically indistinguishable from zero.
struct PivotError : Error {
  using Error::Error;
};

// A square system had no unique solution.
struct SingularError : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

}  // namespace bundlecheck
