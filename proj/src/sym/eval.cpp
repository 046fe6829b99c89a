#include "bundlecheck/sym/eval.hpp"

#include <cmath>
#include <complex>

namespace bundlecheck::sym {

OpaqueFn standard_family() {
  return [](int order, double u) -> double {
    // 1/(1+u^2) = Im 1/(u - i), so the d-th derivative is
    // Im((-1)^d d! (u - i)^(-d-1)).
    std::complex<double> z(u, -1.0);
    std::complex<double> p = std::pow(z, -(order + 1));
    double fact = 1.0;
    for (int k = 2; k <= order; ++k) fact *= k;
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    double v = sign * fact * p.imag();
    if (order == 0) v += 2.0;
    return v;
  };
}

OpaqueFn radial_inverse_of(OpaqueFn f) {
  return [f = std::move(f)](int order, double s) -> double {
    if (!(s >= 0.0)) throw EvalError("inverse scale profile needs a nonnegative argument");
    // Solve f(t)^2 t = s for t by bisection; the profile is monotone.
    auto h = [&](double t) { return f(0, t) * f(0, t) * t; };
    double lo = 0.0, hi = std::max(1.0, s);
    for (int i = 0; i < 200 && h(hi) < s; ++i) hi *= 2.0;
    if (h(hi) < s) throw EvalError("inverse scale profile: bracketing failed");
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      (h(mid) < s ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    double f0 = f(0, t);
    if (f0 == 0.0) throw EvalError("inverse scale profile: scale vanishes");
    if (order == 0) return 1.0 / f0;
    double f1 = f(1, t);
    double hp = f0 * (2.0 * f1 * t + f0);  // d/dt of f(t)^2 t
    if (hp == 0.0) throw EvalError("inverse scale profile: not invertible here");
    double tp = 1.0 / hp;
    if (order == 1) return -f1 * tp / (f0 * f0);
    if (order == 2) {
      double f2 = f(2, t);
      double hpp = 2.0 * f1 * f1 * t + 2.0 * f0 * f2 * t + 4.0 * f0 * f1;
      double tpp = -hpp * tp * tp * tp;
      return (-f2 * tp * tp - f1 * tpp) / (f0 * f0) + 2.0 * f1 * f1 * tp * tp / (f0 * f0 * f0);
    }
    throw EvalError("inverse scale profile: derivative order above 2 not supported");
  };
}

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite value in ") + what);
  return v;
}

}  // namespace

double eval(const Expr& e, const Assignment& a) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Constant:
      return static_cast<double>(n.value);
    case Kind::Symbol: {
      auto it = a.symbols.find(n.name);
      if (it == a.symbols.end()) throw EvalError("symbol not covered: " + n.name);
      return it->second;
    }
    case Kind::Func: {
      double u = eval(n.kids[0], a);
      switch (n.fn) {
        case FuncKind::Sin: return checked(std::sin(u), "sin");
        case FuncKind::Cos: return checked(std::cos(u), "cos");
        case FuncKind::Exp: return checked(std::exp(u), "exp");
        case FuncKind::Log:
          if (u <= 0.0) throw EvalError("log of a nonpositive value");
          return checked(std::log(u), "log");
        case FuncKind::Sqrt:
          if (u < 0.0) throw EvalError("sqrt of a negative value");
          return checked(std::sqrt(u), "sqrt");
      }
      throw EvalError("unknown function");
    }
    case Kind::Opaque: {
      auto it = a.opaques.find(n.name);
      if (it == a.opaques.end()) throw EvalError("opaque function not covered: " + n.name);
      double u = eval(n.kids[0], a);
      return checked(it->second(n.order, u), "opaque call");
    }
    case Kind::Pow: {
      double b = eval(n.kids[0], a);
      if (b == 0.0 && n.expo < 0) throw EvalError("division by zero");
      return checked(std::pow(b, static_cast<double>(n.expo)), "power");
    }
    case Kind::Product: {
      double v = 1.0;
      for (const Expr& k : n.kids) v *= eval(k, a);
      return checked(v, "product");
    }
    case Kind::Sum: {
      double v = 0.0;
      for (const Expr& k : n.kids) v += eval(k, a);
      return checked(v, "sum");
    }
  }
  throw EvalError("unknown node");
}

}  // namespace bundlecheck::sym
