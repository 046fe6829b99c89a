#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bundlecheck/errors.hpp"

namespace bundlecheck::sym {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Kind : std::uint8_t { Constant, Symbol, Func, Opaque, Pow, Product, Sum };

enum class FuncKind : std::uint8_t { Sin, Cos, Exp, Log, Sqrt };

const char* func_name(FuncKind f);

struct Node;

// Immutable symbolic expression over exact rational constants, named symbols,
// the elementary functions sin/cos/exp/log/sqrt, and opaque unary function
// symbols carrying a derivative order. Values are always held in a normal
// form: sums of products with folded constants, merged like terms and like
// factors, and factors ordered by a fixed total order. Nodes are shared and
// never mutated, so copies are cheap and instances may be read concurrently.
class Expr {
 public:
  Expr();                 // the constant 0
  Expr(long long value);  // NOLINT: implicit integer constants are intended

  static Expr constant(Rational value);
  static Expr rational(long long num, long long den);
  static Expr symbol(std::string name);
  static Expr func(FuncKind f, Expr arg);
  static Expr opaque(std::string name, int order, Expr arg);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr pow(Expr base, long long exponent);

  Kind kind() const;
  const Node& node() const;

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_zero() const;  // structural: the constant 0
  bool is_one() const;
  const Rational& constant_value() const;  // requires Constant
  // requires Constant with denominator 1 and value in long long range
  long long integer_value() const;

  // Partial derivative with respect to a symbol. Opaque calls follow the
  // chain rule, incrementing their derivative order.
  Expr diff(const std::string& symbol) const;

  // Simultaneous replacement of symbols by expressions.
  Expr substitute(const std::map<std::string, Expr>& replacements) const;

  // Rebuilds the value bottom-up through the normalizing constructors.
  // Idempotent: already-canonical values come back structurally equal.
  Expr normalized() const;

  std::set<std::string> free_symbols() const;
  // name -> highest derivative order appearing
  std::map<std::string, int> opaque_calls() const;

  std::size_t node_count() const;

  // Infix text that parse() maps back to a structurally equal value.
  std::string str() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
  friend int cmp(const Expr& a, const Expr& b);
  friend struct NodeBuilder;
};

struct Node {
  Kind kind;
  Rational value;         // Constant
  std::string name;       // Symbol, Opaque
  FuncKind fn{};          // Func
  int order = 0;          // Opaque: derivative order, >= 0
  long long expo = 0;     // Pow
  std::vector<Expr> kids; // Sum terms | Product factors | Pow/Func/Opaque arg
};

// Fixed total order; returns <0, 0, >0. Zero iff structurally equal.
int cmp(const Expr& a, const Expr& b);

inline bool operator==(const Expr& a, const Expr& b) { return cmp(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return cmp(a, b) != 0; }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return cmp(a, b) < 0; }
};

inline Expr sin(Expr e) { return Expr::func(FuncKind::Sin, std::move(e)); }
inline Expr cos(Expr e) { return Expr::func(FuncKind::Cos, std::move(e)); }
inline Expr exp(Expr e) { return Expr::func(FuncKind::Exp, std::move(e)); }
inline Expr log(Expr e) { return Expr::func(FuncKind::Log, std::move(e)); }
inline Expr sqrt(Expr e) { return Expr::func(FuncKind::Sqrt, std::move(e)); }

}  // namespace bundlecheck::sym
