#include "bundlecheck/sym/parse.hpp"

#include <cctype>

namespace bundlecheck::sym {

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  bool eat(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) { throw ParseError(at, msg); }

  Expr parse_expr() {
    Expr acc = parse_term();
    for (;;) {
      if (eat('+'))
        acc = acc + parse_term();
      else if (eat('-'))
        acc = acc - parse_term();
      else
        return acc;
    }
  }

  Expr parse_term() {
    Expr acc = parse_unary();
    for (;;) {
      if (eat('*'))
        acc = acc * parse_unary();
      else if (eat('/'))
        acc = acc / parse_unary();
      else
        return acc;
    }
  }

  Expr parse_unary() {
    if (eat('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    if (eat('^')) {
      std::size_t at = pos;
      Expr e = parse_unary();
      long long k;
      try {
        k = e.integer_value();
      } catch (const InvalidArgument&) {
        fail("exponent must be an integer constant", at);
      }
      return Expr::pow(base, k);
    }
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input", pos);
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      if (!eat(')')) fail("expected ')'", pos);
      return e;
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }

  Expr parse_number() {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos < s.size() && s[pos] == '.')
      fail("decimal literals are not supported; write an exact rational with /", pos);
    Integer v(s.substr(start, pos - start));
    return Expr::constant(Rational(v));
  }

  Expr parse_ident() {
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string name = s.substr(start, pos - start);
    int primes = 0;
    while (pos < s.size() && s[pos] == '\'') {
      ++primes;
      ++pos;
    }
    skip_ws();
    bool call = pos < s.size() && s[pos] == '(';
    if (!call) {
      if (primes > 0) fail("derivative marks need a function call", start);
      return Expr::symbol(name);
    }
    ++pos;  // '('
    Expr arg = parse_expr();
    if (!eat(')')) fail("expected ')'", pos);
    static const std::map<std::string, FuncKind> kElementary = {
        {"sin", FuncKind::Sin}, {"cos", FuncKind::Cos}, {"exp", FuncKind::Exp},
        {"log", FuncKind::Log}, {"sqrt", FuncKind::Sqrt}};
    auto it = kElementary.find(name);
    if (it != kElementary.end()) {
      if (primes > 0) fail("derivative marks are only for opaque functions", start);
      return Expr::func(it->second, arg);
    }
    return Expr::opaque(name, primes, arg);
  }
};

}  // namespace

Expr parse(const std::string& text) {
  Parser p(text);
  Expr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input", p.pos);
  return e;
}

}  // namespace bundlecheck::sym
