#include "bundlecheck/sym/expr.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>

namespace bundlecheck::sym {

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr mk(Node&& n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr constant_node(Rational v) {
  Node n;
  n.kind = Kind::Constant;
  n.value = std::move(v);
  return mk(std::move(n));
}

const NodePtr& zero_node() {
  static const NodePtr z = constant_node(Rational(0));
  return z;
}
const NodePtr& one_node() {
  static const NodePtr o = constant_node(Rational(1));
  return o;
}

int kind_rank(Kind k) { return static_cast<int>(k); }

Rational rational_pow(const Rational& v, long long k) {
  if (k == 0) return Rational(1);
  Integer num = boost::multiprecision::numerator(v);
  Integer den = boost::multiprecision::denominator(v);
  bool neg = k < 0;
  unsigned long long m = neg ? static_cast<unsigned long long>(-(k + 1)) + 1ull
                             : static_cast<unsigned long long>(k);
  if (neg && num == 0) throw InvalidArgument("zero raised to a negative power");
  Integer pn = boost::multiprecision::pow(num, static_cast<unsigned>(m));
  Integer pd = boost::multiprecision::pow(den, static_cast<unsigned>(m));
  if (neg) std::swap(pn, pd);
  // this boost::rational rejects negative denominators outright, so move the
  // sign to the numerator ourselves
  if (pd < 0) { pn = -pn; pd = -pd; }
  return Rational(pn, pd);
}

}  // namespace

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Sin: return "sin";
    case FuncKind::Cos: return "cos";
    case FuncKind::Exp: return "exp";
    case FuncKind::Log: return "log";
    case FuncKind::Sqrt: return "sqrt";
  }
  return "?";
}

int cmp(const Expr& a, const Expr& b) {
  if (a.n_ == b.n_) return 0;
  const Node& x = *a.n_;
  const Node& y = *b.n_;
  if (x.kind != y.kind) return kind_rank(x.kind) < kind_rank(y.kind) ? -1 : 1;
  switch (x.kind) {
    case Kind::Constant:
      return x.value < y.value ? -1 : (x.value == y.value ? 0 : 1);
    case Kind::Symbol:
      return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
    case Kind::Func: {
      if (x.fn != y.fn) return static_cast<int>(x.fn) < static_cast<int>(y.fn) ? -1 : 1;
      return cmp(x.kids[0], y.kids[0]);
    }
    case Kind::Opaque: {
      if (int c = x.name.compare(y.name); c != 0) return c < 0 ? -1 : 1;
      if (x.order != y.order) return x.order < y.order ? -1 : 1;
      return cmp(x.kids[0], y.kids[0]);
    }
    case Kind::Pow: {
      if (int c = cmp(x.kids[0], y.kids[0]); c != 0) return c;
      return x.expo < y.expo ? -1 : (x.expo == y.expo ? 0 : 1);
    }
    case Kind::Product:
    case Kind::Sum: {
      std::size_t m = std::min(x.kids.size(), y.kids.size());
      for (std::size_t i = 0; i < m; ++i)
        if (int c = cmp(x.kids[i], y.kids[i]); c != 0) return c;
      if (x.kids.size() != y.kids.size())
        return x.kids.size() < y.kids.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Normalizing constructors. Everything below maintains the canonical shape:
//   Sum:     >=2 terms, none zero, at most one constant, like monomials merged,
//            terms sorted; a term is never itself a Sum.
//   Product: optional leading constant (not 0 or 1), remaining factors are
//            Symbol/Func/Opaque/Pow with pairwise distinct bases, sorted.
//   Pow:     exponent not in {0,1}; base is Symbol/Func/Opaque, or a Sum with
//            unit content (Sums with positive exponents are expanded away).
// ---------------------------------------------------------------------------

struct NodeBuilder {
  static Expr wrap(NodePtr n) { return Expr(std::move(n)); }

  static Expr make_constant(Rational v) { return wrap(constant_node(std::move(v))); }

  static Expr one() { return wrap(one_node()); }
  static Expr zero() { return wrap(zero_node()); }

  // term -> (coefficient, monomial); monomial is 1 for pure constants.
  static std::pair<Rational, Expr> split_coeff(const Expr& t) {
    const Node& n = t.node();
    if (n.kind == Kind::Constant) return {n.value, one()};
    if (n.kind == Kind::Product && n.kids[0].node().kind == Kind::Constant) {
      Rational c = n.kids[0].node().value;
      if (n.kids.size() == 2) return {c, n.kids[1]};
      Node m;
      m.kind = Kind::Product;
      m.kids.assign(n.kids.begin() + 1, n.kids.end());
      return {c, wrap(mk(std::move(m)))};
    }
    return {Rational(1), t};
  }

  static Expr coeff_times(const Rational& c, const Expr& mono) {
    if (c == 0) return zero();
    if (mono.is_one()) return make_constant(c);
    if (c == 1) return mono;
    Node p;
    p.kind = Kind::Product;
    p.kids.push_back(make_constant(c));
    if (mono.kind() == Kind::Product) {
      for (const Expr& k : mono.node().kids) p.kids.push_back(k);
    } else {
      p.kids.push_back(mono);
    }
    return wrap(mk(std::move(p)));
  }

  static Expr make_sum(const std::vector<Expr>& terms) {
    std::map<Expr, Rational, ExprLess> acc;
    std::vector<Expr> work = terms;
    for (std::size_t i = 0; i < work.size(); ++i) {
      const Expr t = work[i];
      if (t.kind() == Kind::Sum) {
        for (const Expr& k : t.node().kids) work.push_back(k);
        continue;
      }
      if (t.is_zero()) continue;
      auto [c, m] = split_coeff(t);
      acc[m] += c;
    }
    std::vector<Expr> out;
    out.reserve(acc.size());
    for (const auto& [m, c] : acc) {
      if (c == 0) continue;
      out.push_back(coeff_times(c, m));
    }
    if (out.size() >= 2) {
      if (auto reduced = reduce_fractions(out)) return make_sum(*reduced);
    }
    if (out.empty()) return zero();
    if (out.size() == 1) return out[0];
    std::sort(out.begin(), out.end(), ExprLess{});
    Node s;
    s.kind = Kind::Sum;
    s.kids = std::move(out);
    return wrap(mk(std::move(s)));
  }

  // term -> denominator part (negative powers of sum bases) plus the rest.
  struct FractionView {
    std::map<Expr, long long, ExprLess> den;
    Rational coeff{1};
    std::vector<Expr> num;
  };

  static FractionView fraction_view(const Expr& term) {
    FractionView v;
    std::vector<Expr> work{term};
    for (std::size_t i = 0; i < work.size(); ++i) {
      const Expr f = work[i];
      const Node& n = f.node();
      if (n.kind == Kind::Constant) {
        v.coeff *= n.value;
      } else if (n.kind == Kind::Product) {
        for (const Expr& k : n.kids) work.push_back(k);
      } else if (n.kind == Kind::Pow && n.expo < 0 && n.kids[0].kind() == Kind::Sum) {
        v.den[n.kids[0]] += n.expo;
      } else {
        v.num.push_back(f);
      }
    }
    return v;
  }

  // Cancels shared sum denominators: terms with identical denominators are
  // regrouped and the combined numerator is divided exactly when possible,
  // so q^2/(1+q^2) + 1/(1+q^2) collapses to 1. Returns the rewritten term
  // list, or nullopt when nothing cancels. Each success strictly shrinks the
  // total denominator degree, so the caller's re-normalization terminates.
  static std::optional<std::vector<Expr>> reduce_fractions(const std::vector<Expr>& out) {
    bool any_den = false;
    for (const Expr& t : out) {
      const Node& n = t.node();
      if (n.kind == Kind::Pow && n.expo < 0 && n.kids[0].kind() == Kind::Sum) any_den = true;
      if (n.kind == Kind::Product)
        for (const Expr& k : n.kids) {
          const Node& kn = k.node();
          if (kn.kind == Kind::Pow && kn.expo < 0 && kn.kids[0].kind() == Kind::Sum) any_den = true;
        }
      if (any_den) break;
    }
    if (!any_den) return std::nullopt;

    std::vector<FractionView> views;
    views.reserve(out.size());
    for (const Expr& t : out) views.push_back(fraction_view(t));

    // group indices by denominator
    std::map<Expr, std::vector<std::size_t>, ExprLess> groups;
    for (std::size_t i = 0; i < views.size(); ++i) {
      if (views[i].den.empty()) continue;
      std::vector<Expr> key;
      for (const auto& [b, e] : views[i].den) key.push_back(pow_node(b, e));
      groups[assemble_product(Rational(1), std::move(key))].push_back(i);
    }

    bool changed = false;
    std::vector<bool> consumed(out.size(), false);
    std::vector<Expr> rewritten;
    for (auto& [key, idx] : groups) {
      if (idx.size() < 2) continue;
      std::vector<Expr> numerators;
      for (std::size_t i : idx)
        numerators.push_back(assemble_product(views[i].coeff, views[i].num));
      Expr n_sum = make_sum(numerators);
      auto den = views[idx[0]].den;
      bool reduced = false;
      if (n_sum.is_zero()) {
        reduced = true;
      } else {
        for (auto& [base, e] : den) {
          while (e < 0) {
            auto q = divide_sum_exact(n_sum, base);
            if (!q) break;
            n_sum = *q;
            ++e;
            reduced = true;
            if (n_sum.is_zero()) break;
          }
          if (n_sum.is_zero()) break;
        }
      }
      if (!reduced) continue;
      changed = true;
      for (std::size_t i : idx) consumed[i] = true;
      if (n_sum.is_zero()) continue;
      std::vector<Expr> factors{n_sum};
      for (const auto& [base, e] : den)
        if (e < 0) factors.push_back(pow_node(base, e));
      rewritten.push_back(make_product(factors));
    }
    if (!changed) return std::nullopt;
    std::vector<Expr> result;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!consumed[i]) result.push_back(out[i]);
    for (Expr& e : rewritten) result.push_back(std::move(e));
    return result;
  }

  // Exact multivariate polynomial division over the term atoms, graded-lex
  // order. Treats every non-constant factor base as an independent variable,
  // which keeps the rewrite an identity regardless of what the atoms denote.
  // Returns nullopt when num is not an exact multiple of den.
  static std::optional<Expr> divide_sum_exact(const Expr& num, const Expr& den) {
    std::map<Expr, std::size_t, ExprLess> atom_index;
    auto atoms_of = [&atom_index](const Expr& e) {
      for (const Expr& t : terms_of(e)) {
        auto [c, m] = split_coeff(t);
        (void)c;
        if (m.is_one()) continue;
        std::vector<Expr> fs =
            m.kind() == Kind::Product ? m.node().kids : std::vector<Expr>{m};
        for (const Expr& f : fs) {
          const Node& fn = f.node();
          const Expr base = fn.kind == Kind::Pow ? fn.kids[0] : f;
          atom_index.emplace(base, atom_index.size());
        }
      }
    };
    atoms_of(num);
    atoms_of(den);
    const std::size_t na = atom_index.size();

    using Mono = std::vector<long long>;
    auto term_mono = [&](const Expr& t) -> std::pair<Rational, Mono> {
      auto [c, m] = split_coeff(t);
      Mono mono(na, 0);
      if (!m.is_one()) {
        std::vector<Expr> fs =
            m.kind() == Kind::Product ? m.node().kids : std::vector<Expr>{m};
        for (const Expr& f : fs) {
          const Node& fn = f.node();
          if (fn.kind == Kind::Pow)
            mono[atom_index.at(fn.kids[0])] += fn.expo;
          else
            mono[atom_index.at(f)] += 1;
        }
      }
      return {c, mono};
    };

    // graded lex, largest first
    auto mono_greater = [](const Mono& a, const Mono& b) {
      long long da = 0, db = 0;
      for (long long x : a) da += x;
      for (long long x : b) db += x;
      if (da != db) return da > db;
      return a > b;
    };

    std::map<Mono, Rational, decltype(mono_greater)> rem(mono_greater);
    for (const Expr& t : terms_of(num)) {
      auto [c, mono] = term_mono(t);
      rem[mono] += c;
    }
    std::vector<std::pair<Rational, Mono>> dterms;
    for (const Expr& t : terms_of(den)) dterms.push_back(term_mono(t));
    std::sort(dterms.begin(), dterms.end(),
              [&](const auto& a, const auto& b) { return mono_greater(a.second, b.second); });
    if (dterms.empty() || dterms[0].first == 0) return std::nullopt;
    const Mono& dlead = dterms[0].second;
    const Rational& dcoeff = dterms[0].first;

    std::vector<std::pair<Rational, Mono>> quot;
    for (int step = 0; step < 4096; ++step) {
      while (!rem.empty() && rem.begin()->second == 0) rem.erase(rem.begin());
      if (rem.empty()) break;
      const Mono rlead = rem.begin()->first;
      const Rational rcoeff = rem.begin()->second;
      Mono t(na, 0);
      long long tdeg = 0;
      for (std::size_t i = 0; i < na; ++i) {
        t[i] = rlead[i] - dlead[i];
        tdeg += t[i];
      }
      // a quotient monomial with negative total degree cannot arise from an
      // exact polynomial multiple; bail before the loop can wander
      if (tdeg < 0) return std::nullopt;
      Rational tc = rcoeff / dcoeff;
      quot.emplace_back(tc, t);
      for (const auto& [dc, dm] : dterms) {
        Mono prod(na, 0);
        for (std::size_t i = 0; i < na; ++i) prod[i] = t[i] + dm[i];
        rem[prod] -= tc * dc;
      }
      while (!rem.empty() && rem.begin()->second == 0) rem.erase(rem.begin());
    }
    if (!rem.empty()) return std::nullopt;

    std::vector<Expr> atoms(na, zero());
    for (const auto& [base, i] : atom_index) atoms[i] = base;
    std::vector<Expr> qterms;
    for (const auto& [c, mono] : quot) {
      std::vector<Expr> fs;
      for (std::size_t i = 0; i < na; ++i) {
        if (mono[i] == 0) continue;
        fs.push_back(mono[i] == 1 ? atoms[i] : pow_node(atoms[i], mono[i]));
      }
      qterms.push_back(assemble_product(c, std::move(fs)));
    }
    return make_sum(qterms);
  }

  // Sum -> (content, unit-content sum). The content is the gcd of the term
  // coefficients, signed so the first canonical term becomes positive.
  static std::pair<Rational, Expr> extract_content(const Expr& s) {
    const auto& kids = s.node().kids;
    Integer gn = 0, gl = 1;
    for (const Expr& t : kids) {
      auto [c, m] = split_coeff(t);
      (void)m;
      gn = boost::multiprecision::gcd(gn, boost::multiprecision::abs(boost::multiprecision::numerator(c)));
      gl = boost::multiprecision::lcm(gl, boost::multiprecision::denominator(c));
    }
    Rational content(gn, gl);
    auto [c0, m0] = split_coeff(kids[0]);
    (void)m0;
    if (c0 < 0) content = -content;
    if (content == 1) return {content, s};
    Rational inv = Rational(1) / content;
    std::vector<Expr> scaled;
    scaled.reserve(kids.size());
    for (const Expr& t : kids) {
      auto [c, m] = split_coeff(t);
      scaled.push_back(coeff_times(c * inv, m));
    }
    return {content, make_sum(scaled)};
  }

  static std::vector<Expr> terms_of(const Expr& e) {
    if (e.kind() == Kind::Sum) return e.node().kids;
    return {e};
  }

  static Expr distribute(const Expr& a, const Expr& b) {
    std::vector<Expr> out;
    for (const Expr& ta : terms_of(a))
      for (const Expr& tb : terms_of(b)) out.push_back(make_product({ta, tb}));
    return make_sum(out);
  }

  static Expr pow_node(const Expr& base, long long k) {
    Node p;
    p.kind = Kind::Pow;
    p.expo = k;
    p.kids.push_back(base);
    return wrap(mk(std::move(p)));
  }

  static Expr assemble_product(const Rational& coeff, std::vector<Expr> factors) {
    if (coeff == 0) return zero();
    std::sort(factors.begin(), factors.end(), ExprLess{});
    if (factors.empty()) return make_constant(coeff);
    if (coeff == 1 && factors.size() == 1) return factors[0];
    Node p;
    p.kind = Kind::Product;
    if (coeff != 1) p.kids.push_back(make_constant(coeff));
    for (Expr& f : factors) p.kids.push_back(std::move(f));
    if (p.kids.size() == 1) return p.kids[0];
    return wrap(mk(std::move(p)));
  }

  static Expr make_product(const std::vector<Expr>& factors) {
    Rational coeff(1);
    std::map<Expr, long long, ExprLess> bases;
    std::vector<Expr> work = factors;
    for (std::size_t i = 0; i < work.size(); ++i) {
      const Expr f = work[i];
      const Node& n = f.node();
      switch (n.kind) {
        case Kind::Constant:
          coeff *= n.value;
          break;
        case Kind::Product:
          for (const Expr& k : n.kids) work.push_back(k);
          break;
        case Kind::Pow:
          bases[n.kids[0]] += n.expo;
          break;
        default:
          bases[f] += 1;
          break;
      }
    }
    if (coeff == 0) return zero();

    std::vector<Expr> plain;
    std::vector<std::pair<Expr, long long>> sum_powers;  // positive powers of sums
    for (const auto& [base, e] : bases) {
      if (e == 0) continue;
      if (base.kind() == Kind::Sum) {
        auto [c, unit] = extract_content(base);
        coeff *= rational_pow(c, e);
        if (e >= 1)
          sum_powers.emplace_back(unit, e);
        else
          plain.push_back(pow_node(unit, e));
      } else if (e == 1) {
        plain.push_back(base);
      } else {
        plain.push_back(pow_node(base, e));
      }
    }
    Expr acc = assemble_product(coeff, std::move(plain));
    for (const auto& [s, k] : sum_powers)
      for (long long i = 0; i < k; ++i) acc = distribute(acc, s);
    return acc;
  }

  static Expr make_pow(const Expr& base, long long k) {
    if (k == 0) return one();
    if (k == 1) return base;
    const Node& n = base.node();
    switch (n.kind) {
      case Kind::Constant:
        return make_constant(rational_pow(n.value, k));
      case Kind::Pow:
        return make_pow(n.kids[0], n.expo * k);
      case Kind::Product: {
        std::vector<Expr> ps;
        ps.reserve(n.kids.size());
        for (const Expr& f : n.kids) ps.push_back(make_pow(f, k));
        return make_product(ps);
      }
      case Kind::Sum: {
        auto [c, unit] = extract_content(base);
        Rational ck = rational_pow(c, k);
        if (k >= 2) {
          Expr acc = unit;
          for (long long i = 1; i < k; ++i) acc = distribute(acc, unit);
          return make_product({make_constant(ck), acc});
        }
        return assemble_product(ck, {pow_node(unit, k)});
      }
      default:
        return pow_node(base, k);
    }
  }

  static Expr make_func(FuncKind f, const Expr& arg) {
    if (arg.is_zero()) {
      switch (f) {
        case FuncKind::Sin: return zero();
        case FuncKind::Cos: return one();
        case FuncKind::Exp: return one();
        case FuncKind::Sqrt: return zero();
        case FuncKind::Log: break;  // log 0: keep symbolic, numeric eval rejects it
      }
    }
    if (arg.is_one()) {
      if (f == FuncKind::Log) return zero();
      if (f == FuncKind::Sqrt) return one();
    }
    Node n;
    n.kind = Kind::Func;
    n.fn = f;
    n.kids.push_back(arg);
    return wrap(mk(std::move(n)));
  }

  static Expr make_opaque(std::string name, int order, const Expr& arg) {
    if (order < 0) throw InvalidArgument("negative derivative order");
    Node n;
    n.kind = Kind::Opaque;
    n.name = std::move(name);
    n.order = order;
    n.kids.push_back(arg);
    return wrap(mk(std::move(n)));
  }
};

// ---------------------------------------------------------------------------
// Expr surface
// ---------------------------------------------------------------------------

Expr::Expr() : n_(zero_node()) {}
Expr::Expr(long long value) : n_(value == 0 ? zero_node() : constant_node(Rational(value))) {}

Expr Expr::constant(Rational value) { return NodeBuilder::make_constant(std::move(value)); }
Expr Expr::rational(long long num, long long den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) { num = -num; den = -den; }
  return NodeBuilder::make_constant(Rational(num, den));
}
Expr Expr::symbol(std::string name) {
  if (name.empty()) throw InvalidArgument("empty symbol name");
  Node n;
  n.kind = Kind::Symbol;
  n.name = std::move(name);
  return NodeBuilder::wrap(mk(std::move(n)));
}
Expr Expr::func(FuncKind f, Expr arg) { return NodeBuilder::make_func(f, arg); }
Expr Expr::opaque(std::string name, int order, Expr arg) {
  return NodeBuilder::make_opaque(std::move(name), order, arg);
}
Expr Expr::sum(std::vector<Expr> terms) { return NodeBuilder::make_sum(terms); }
Expr Expr::product(std::vector<Expr> factors) { return NodeBuilder::make_product(factors); }
Expr Expr::pow(Expr base, long long exponent) { return NodeBuilder::make_pow(base, exponent); }

Kind Expr::kind() const { return n_->kind; }
const Node& Expr::node() const { return *n_; }
bool Expr::is_zero() const { return n_->kind == Kind::Constant && n_->value == 0; }
bool Expr::is_one() const { return n_->kind == Kind::Constant && n_->value == 1; }
const Rational& Expr::constant_value() const {
  if (!is_constant()) throw InvalidArgument("not a constant");
  return n_->value;
}
long long Expr::integer_value() const {
  const Rational& v = constant_value();
  if (boost::multiprecision::denominator(v) != 1)
    throw InvalidArgument("constant is not an integer");
  Integer num = boost::multiprecision::numerator(v);
  if (num < std::numeric_limits<long long>::min() || num > std::numeric_limits<long long>::max())
    throw InvalidArgument("integer constant out of range");
  return static_cast<long long>(num);
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::product({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::pow(b, -1)}); }
Expr Expr::operator-() const { return Expr::product({Expr(-1), *this}); }

Expr Expr::diff(const std::string& symbol) const {
  const Node& n = *n_;
  switch (n.kind) {
    case Kind::Constant:
      return Expr();
    case Kind::Symbol:
      return n.name == symbol ? Expr(1) : Expr();
    case Kind::Sum: {
      std::vector<Expr> parts;
      parts.reserve(n.kids.size());
      for (const Expr& t : n.kids) parts.push_back(t.diff(symbol));
      return Expr::sum(parts);
    }
    case Kind::Product: {
      std::vector<Expr> parts;
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        std::vector<Expr> fs = n.kids;
        fs[i] = n.kids[i].diff(symbol);
        parts.push_back(Expr::product(fs));
      }
      return Expr::sum(parts);
    }
    case Kind::Pow: {
      Expr db = n.kids[0].diff(symbol);
      return Expr::product({Expr(n.expo), Expr::pow(n.kids[0], n.expo - 1), db});
    }
    case Kind::Func: {
      const Expr& u = n.kids[0];
      Expr du = u.diff(symbol);
      Expr outer;
      switch (n.fn) {
        case FuncKind::Sin: outer = cos(u); break;
        case FuncKind::Cos: outer = -sin(u); break;
        case FuncKind::Exp: outer = exp(u); break;
        case FuncKind::Log: outer = Expr::pow(u, -1); break;
        case FuncKind::Sqrt: outer = Expr::rational(1, 2) * Expr::pow(sqrt(u), -1); break;
      }
      return outer * du;
    }
    case Kind::Opaque: {
      const Expr& u = n.kids[0];
      return Expr::opaque(n.name, n.order + 1, u) * u.diff(symbol);
    }
  }
  return Expr();
}

Expr Expr::substitute(const std::map<std::string, Expr>& replacements) const {
  const Node& n = *n_;
  switch (n.kind) {
    case Kind::Constant:
      return *this;
    case Kind::Symbol: {
      auto it = replacements.find(n.name);
      return it == replacements.end() ? *this : it->second;
    }
    case Kind::Func:
      return Expr::func(n.fn, n.kids[0].substitute(replacements));
    case Kind::Opaque:
      return Expr::opaque(n.name, n.order, n.kids[0].substitute(replacements));
    case Kind::Pow:
      return Expr::pow(n.kids[0].substitute(replacements), n.expo);
    case Kind::Product: {
      std::vector<Expr> fs;
      fs.reserve(n.kids.size());
      for (const Expr& k : n.kids) fs.push_back(k.substitute(replacements));
      return Expr::product(fs);
    }
    case Kind::Sum: {
      std::vector<Expr> ts;
      ts.reserve(n.kids.size());
      for (const Expr& k : n.kids) ts.push_back(k.substitute(replacements));
      return Expr::sum(ts);
    }
  }
  return *this;
}

Expr Expr::normalized() const { return substitute({}); }

namespace {
void collect_symbols(const Expr& e, std::set<std::string>& out) {
  const Node& n = e.node();
  if (n.kind == Kind::Symbol) out.insert(n.name);
  for (const Expr& k : n.kids) collect_symbols(k, out);
}
void collect_opaques(const Expr& e, std::map<std::string, int>& out) {
  const Node& n = e.node();
  if (n.kind == Kind::Opaque) {
    auto [it, fresh] = out.emplace(n.name, n.order);
    if (!fresh) it->second = std::max(it->second, n.order);
  }
  for (const Expr& k : n.kids) collect_opaques(k, out);
}
}  // namespace

std::set<std::string> Expr::free_symbols() const {
  std::set<std::string> s;
  collect_symbols(*this, s);
  return s;
}

std::map<std::string, int> Expr::opaque_calls() const {
  std::map<std::string, int> m;
  collect_opaques(*this, m);
  return m;
}

std::size_t Expr::node_count() const {
  std::size_t c = 1;
  for (const Expr& k : n_->kids) c += k.node_count();
  return c;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string rational_str(const Rational& v) {
  std::ostringstream os;
  os << v;  // prints p/q or p
  return os.str();
}

void print_expr(std::ostringstream& os, const Expr& e);

void print_factor(std::ostringstream& os, const Expr& f) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::Symbol:
      os << n.name;
      return;
    case Kind::Func:
      os << func_name(n.fn) << '(';
      print_expr(os, n.kids[0]);
      os << ')';
      return;
    case Kind::Opaque: {
      os << n.name;
      for (int i = 0; i < n.order; ++i) os << '\'';
      os << '(';
      print_expr(os, n.kids[0]);
      os << ')';
      return;
    }
    case Kind::Pow: {
      const Expr& base = n.kids[0];
      if (base.kind() == Kind::Sum) {
        os << '(';
        print_expr(os, base);
        os << ')';
      } else {
        print_factor(os, base);
      }
      if (n.expo < 0)
        os << "^(" << n.expo << ')';
      else
        os << '^' << n.expo;
      return;
    }
    default:
      os << '(';
      print_expr(os, f);
      os << ')';
      return;
  }
}

// prints |coeff| * monomial; caller handles the sign
void print_term_magnitude(std::ostringstream& os, const Rational& coeff_abs, const Expr& mono) {
  if (mono.is_one()) {
    os << rational_str(coeff_abs);
    return;
  }
  bool first = true;
  if (coeff_abs != 1) {
    os << rational_str(coeff_abs);
    first = false;
  }
  if (mono.kind() == Kind::Product) {
    for (const Expr& f : mono.node().kids) {
      if (!first) os << '*';
      print_factor(os, f);
      first = false;
    }
  } else {
    if (!first) os << '*';
    print_factor(os, mono);
  }
}

void print_expr(std::ostringstream& os, const Expr& e) {
  if (e.kind() == Kind::Sum) {
    bool first = true;
    for (const Expr& t : e.node().kids) {
      auto [c, m] = NodeBuilder::split_coeff(t);
      if (first) {
        if (c < 0) os << '-';
        print_term_magnitude(os, c < 0 ? Rational(-c) : c, m);
        first = false;
      } else {
        os << (c < 0 ? " - " : " + ");
        print_term_magnitude(os, c < 0 ? Rational(-c) : c, m);
      }
    }
    return;
  }
  auto [c, m] = NodeBuilder::split_coeff(e);
  if (c < 0) os << '-';
  print_term_magnitude(os, c < 0 ? Rational(-c) : c, m);
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print_expr(os, *this);
  return os.str();
}

}  // namespace bundlecheck::sym
