#include "bundlecheck/cli/runner.hpp"

#include <algorithm>
#include <chrono>

#include "bundlecheck/geom/map.hpp"
#include "bundlecheck/sym/parse.hpp"
#include "bundlecheck/sym/zerotest.hpp"

namespace bundlecheck::cli {

using geom::Chart;
using geom::CoordinateMap;
using geom::OneForm;
using geom::Tensor11;
using geom::VectorField;
using sym::Expr;
using sym::ZeroVerdict;

namespace {

[[noreturn]] void spec_fault(const Section& s, const std::string& msg) {
  throw ParseError(0, "[" + s.kind + " " + s.name + "]: " + msg);
}

int parse_int(const Section& s, const std::string& key) {
  const std::string& v = s.at(key);
  try {
    std::size_t used = 0;
    int n = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    spec_fault(s, "key '" + key + "' is not an integer: " + v);
  }
}

bool parse_bool(const Section& s, const std::string& key) {
  const std::string& v = s.at(key);
  if (v == "true") return true;
  if (v == "false") return false;
  spec_fault(s, "key '" + key + "' must be true or false, got: " + v);
}

}  // namespace

bool Report::all_pass(bool strict) const {
  for (const TaskEntry& t : tasks) {
    if (t.verdict == Verdict::Fail) return false;
    if (strict && t.verdict == Verdict::ProbablyZero) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Workspace
// ---------------------------------------------------------------------------

Workspace::Workspace(const SpecFile& spec, const RunOptions& opt) : opt_(opt), verify_(opt.verify) {
  // realization rules first: every later build samples with the final table
  for (const Section* s : spec.of_kind("opaque")) {
    const std::string* rule = s->find("rule");
    if (!rule || *rule == "standard") {
      verify_.domain.opaques[s->name] = sym::standard_family();
      continue;
    }
    std::size_t sp = rule->find(' ');
    if (rule->rfind("radial_inverse", 0) == 0 && sp != std::string::npos) {
      std::string basis = rule->substr(sp + 1);
      auto it = verify_.domain.opaques.find(basis);
      sym::OpaqueFn base_fn = it != verify_.domain.opaques.end() ? it->second : sym::standard_family();
      verify_.domain.opaques[s->name] = sym::radial_inverse_of(base_fn);
      continue;
    }
    spec_fault(*s, "unknown realization rule: " + *rule);
  }

  for (const Section* s : spec.of_kind("chart")) {
    try {
      charts_.emplace(s->name, Chart(s->name, split_list(s->at("coords"))));
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
  for (const Section* s : spec.of_kind("expr")) {
    try {
      exprs_.emplace(s->name, sym::parse(s->at("value")));
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
  for (const Section* s : spec.of_kind("vectorfield")) {
    try {
      fields_.emplace(s->name, VectorField(chart(s->at("chart")), expr_list(s->at("comps"))));
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
  for (const Section* s : spec.of_kind("oneform")) {
    try {
      oneforms_.emplace(s->name, OneForm(chart(s->at("chart")), expr_list(s->at("comps"))));
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
  for (const Section* s : spec.of_kind("tensor")) {
    try {
      const Chart& c = chart(s->at("chart"));
      auto rows = split_matrix(s->at("comps"));
      if (static_cast<int>(rows.size()) != c.dim())
        spec_fault(*s, "tensor needs " + std::to_string(c.dim()) + " rows");
      std::vector<Expr> rowmajor;
      for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c.dim())
          spec_fault(*s, "tensor rows need " + std::to_string(c.dim()) + " entries");
        for (const std::string& cell : row) rowmajor.push_back(expr(cell));
      }
      tensors_.emplace(s->name, Tensor11(c, std::move(rowmajor)));
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
  for (const Section* s : spec.of_kind("map")) {
    try {
      std::optional<std::vector<Expr>> inv;
      if (s->find("inverse")) inv = expr_list(s->at("inverse"));
      maps_.emplace(s->name, CoordinateMap(chart(s->at("source")), chart(s->at("target")),
                                           expr_list(s->at("forward")), std::move(inv)));
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
  for (const Section* s : spec.of_kind("metric")) {
    try {
      auto base = split_list(s->at("base"));
      auto rows = split_matrix(s->at("g"));
      sym::ExprMatrix g(static_cast<int>(rows.size()),
                        rows.empty() ? 0 : static_cast<int>(rows[0].size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) spec_fault(*s, "metric matrix must be square");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
          g.at(static_cast<int>(i), static_cast<int>(j)) = expr(rows[i][j]);
      }
      metrics_.emplace(s->name, legendre::Metric(std::move(base), std::move(g)));
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
  for (const Section* s : spec.of_kind("cotangent")) {
    try {
      const Chart& c = chart(s->at("chart"));
      auto base = split_list(s->at("base"));
      auto fiber = split_list(s->at("fiber"));
      if (s->find("theta")) {
        std::optional<VectorField> delta;
        if (s->find("delta")) delta = vectorfield(s->at("delta"));
        cotangents_.emplace(s->name, cotangent::make_structure(c, base, fiber,
                                                               oneform(s->at("theta")),
                                                               std::move(delta), verify_));
      } else {
        cotangents_.emplace(s->name, cotangent::canonical_structure(c, base, fiber));
      }
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
  for (const Section* s : spec.of_kind("tangent")) {
    try {
      const Chart& c = chart(s->at("chart"));
      bundle::PartialLinearStructure pls{c, vectorfield(s->at("delta")),
                                         expr_list(s->at("base")), expr_list(s->at("fiber"))};
      Tensor11 S;
      if (s->find("s")) {
        S = tensor(s->at("s"));
      } else if (s->find("sode")) {
        bundle::BasicSubalgebra A(c, pls.base_gens);
        S = bundle::build_S_from_sode(vectorfield(s->at("sode")), A, verify_);
      } else {
        spec_fault(*s, "needs either 's' or 'sode'");
      }
      tangents_.emplace(s->name, bundle::TangentStructure{std::move(pls), std::move(S)});
    } catch (const Error& e) {
      spec_fault(*s, e.what());
    }
  }
}

namespace {

template <class M>
const typename M::mapped_type& lookup(const M& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw ParseError(0, std::string("no ") + what + " named '" + name + "'");
  return it->second;
}

}  // namespace

const Chart& Workspace::chart(const std::string& n) const { return lookup(charts_, n, "chart"); }
const VectorField& Workspace::vectorfield(const std::string& n) const {
  return lookup(fields_, n, "vectorfield");
}
const OneForm& Workspace::oneform(const std::string& n) const {
  return lookup(oneforms_, n, "oneform");
}
const Tensor11& Workspace::tensor(const std::string& n) const { return lookup(tensors_, n, "tensor"); }
const CoordinateMap& Workspace::coordmap(const std::string& n) const {
  return lookup(maps_, n, "map");
}
const bundle::TangentStructure& Workspace::tangent(const std::string& n) const {
  return lookup(tangents_, n, "tangent structure");
}
const cotangent::CotangentStructure& Workspace::cotangent_structure(const std::string& n) const {
  return lookup(cotangents_, n, "cotangent structure");
}
const legendre::Metric& Workspace::metric(const std::string& n) const {
  return lookup(metrics_, n, "metric");
}

Expr Workspace::expr(const std::string& text) const {
  auto it = exprs_.find(text);
  if (it != exprs_.end()) return it->second;
  return sym::parse(text);
}

std::vector<Expr> Workspace::expr_list(const std::string& text) const {
  std::vector<Expr> out;
  for (const std::string& e : split_list(text)) out.push_back(expr(e));
  return out;
}

// ---------------------------------------------------------------------------
// Task execution
// ---------------------------------------------------------------------------

namespace {

// Residuals that should all be zero, folded into one entry: structural zeros
// pass, sampled zeros downgrade to probably-zero, any witness fails.
CheckResult zero_family(const std::string& id, const std::vector<Expr>& residuals,
                        const sym::ZeroOptions& zopt) {
  CheckResult r;
  r.id = id;
  for (const Expr& e : residuals) {
    sym::ZeroWitness w = sym::is_zero_detail(e, zopt);
    r.max_abs_residual = std::max(r.max_abs_residual, w.max_abs);
    r.max_rel_residual = std::max(r.max_rel_residual, w.max_rel);
    if (w.verdict == ZeroVerdict::NonZero) {
      r.verdict = Verdict::Fail;
      if (r.detail.empty()) r.detail = e.str();
    } else if (w.verdict == ZeroVerdict::ProbablyZero && r.verdict == Verdict::Pass) {
      r.verdict = Verdict::ProbablyZero;
    }
  }
  return r;
}

CheckResult flag_check(const std::string& id, bool ok, std::string detail = {}) {
  CheckResult r;
  r.id = id;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  r.detail = std::move(detail);
  return r;
}

// "name : expr" bindings, ';'-separated
std::map<std::string, Expr> parse_bindings(const Workspace& ws, const Section& s,
                                           const std::string& key) {
  std::map<std::string, Expr> out;
  for (const std::string& item : split_list(s.at(key))) {
    std::size_t colon = item.find(':');
    if (colon == std::string::npos) spec_fault(s, "binding needs 'name : expr': " + item);
    std::string name = item.substr(0, colon);
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
    out[name] = ws.expr(item.substr(colon + 1));
  }
  return out;
}

struct TaskRun {
  const Workspace& ws;
  const Section& task;
  std::vector<CheckResult> checks;

  const numcheck::VerifyOptions& vo() const { return ws.verify(); }
  sym::ZeroOptions zo() const { return ws.verify().zero(); }
  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void add_report(const StructureReport& sr) {
    for (const CheckResult& c : sr.checks) checks.push_back(c);
  }
};

void run_verify_tangent(TaskRun& t) {
  t.add_report(bundle::verify_tangent_structure(t.ws.tangent(t.task.at("structure")), t.vo()));
}

void run_verify_cotangent(TaskRun& t) {
  const auto& C = t.ws.cotangent_structure(t.task.at("structure"));
  t.add_report(cotangent::verify_cotangent_structure(C, t.vo()));
  if (t.task.find("liouville")) {
    const VectorField& expected = t.ws.vectorfield(t.task.at("liouville"));
    VectorField got = cotangent::liouville_from_theta(C.theta, t.vo());
    std::vector<Expr> diff;
    for (int i = 0; i < C.chart.dim(); ++i)
      diff.push_back(Expr::sum({got.comps[i], Expr::product({Expr(-1), expected.comps[i]})}));
    t.add(zero_family("liouville", diff, t.zo()));
  }
}

void run_vertical(TaskRun& t) {
  const Chart& c = t.ws.chart(t.task.at("chart"));
  bundle::BasicSubalgebra A(c, t.ws.expr_list(t.task.at("generators")));
  std::vector<VectorField> basis = bundle::vertical_distribution(A, t.vo());

  std::vector<Expr> annih;
  for (const VectorField& Y : basis)
    for (const Expr& g : A.generators) annih.push_back(geom::lie_derivative(Y, g));
  CheckResult base_check = zero_family("vertical-basis", annih, t.zo());
  if (t.task.find("count") && static_cast<int>(basis.size()) != parse_int(t.task, "count")) {
    base_check.verdict = Verdict::Fail;
    base_check.detail = "basis count " + std::to_string(basis.size());
  }
  t.add(base_check);

  if (t.task.find("expect")) {
    const VectorField& want = t.ws.vectorfield(t.task.at("expect"));
    if (basis.size() != 1) {
      t.add(flag_check("match", false, "expected a one-field basis"));
    } else {
      // equality up to normalization: all 2x2 minors of (got, want) vanish
      std::vector<Expr> cross;
      for (int i = 0; i < c.dim(); ++i)
        for (int j = i + 1; j < c.dim(); ++j)
          cross.push_back(Expr::sum(
              {Expr::product({basis[0].comps[i], want.comps[j]}),
               Expr::product({Expr(-1), basis[0].comps[j], want.comps[i]})}));
      t.add(zero_family("match", cross, t.zo()));
    }
  }

  if (t.task.find("push-map")) {
    const CoordinateMap& phi = t.ws.coordmap(t.task.at("push-map"));
    const VectorField& X = t.ws.vectorfield(t.task.at("push-field"));
    const VectorField& Y = t.ws.vectorfield(t.task.at("push-expect"));
    t.add(zero_family("pushforward", geom::pushforward_residuals(phi, X, Y), t.zo()));
  }
}

void run_sode(TaskRun& t) {
  const auto& T = t.ws.tangent(t.task.at("structure"));
  const VectorField& gamma = t.ws.vectorfield(t.task.at("field"));
  bundle::BasicSubalgebra A(T.pls.chart, T.pls.base_gens);
  bool alg = bundle::is_sode_algebraic(gamma, A, T.pls.delta, t.vo());
  bool tens = bundle::is_sode_tensorial(gamma, T, t.vo());
  t.add(flag_check("sode-algebraic", alg));
  t.add(flag_check("sode-tensorial", tens));
  t.add(flag_check("criteria-agree", alg == tens));
}

void run_build_s(TaskRun& t) {
  const auto& T = t.ws.tangent(t.task.at("structure"));
  const VectorField& gamma = t.ws.vectorfield(t.task.at("field"));
  bundle::BasicSubalgebra A(T.pls.chart, T.pls.base_gens);
  std::optional<Tensor11> built;
  std::string err;
  try {
    built = bundle::build_S_from_sode(gamma, A, t.vo());
  } catch (const Error& e) {
    err = e.what();
  }
  t.add(flag_check("built", built.has_value(), err));
  if (t.task.find("expect")) {
    if (!built) {
      t.add(flag_check("match", false, "nothing was built"));
    } else {
      const Tensor11& want = t.ws.tensor(t.task.at("expect"));
      std::vector<Expr> diff;
      for (std::size_t k = 0; k < built->comps.size(); ++k)
        diff.push_back(
            Expr::sum({built->comps[k], Expr::product({Expr(-1), want.comps[k]})}));
      t.add(zero_family("match", diff, t.zo()));
    }
  }
}

legendre::FiberedChart fibered_chart(const Workspace& ws, const Section& s) {
  return legendre::FiberedChart(ws.chart(s.at("source-chart")),
                                split_list(s.at("source-base")),
                                split_list(s.at("source-fiber")));
}

void run_legendre(TaskRun& t) {
  legendre::FiberedChart tc = fibered_chart(t.ws, t.task);
  const Chart& dual = t.ws.chart(t.task.at("dual-chart"));

  Expr L;
  if (t.task.find("metric")) {
    const legendre::Metric& g = t.ws.metric(t.task.at("metric"));
    t.add(flag_check("positive-definite", legendre::is_positive_definite(g, t.vo())));
    L = legendre::geodesic_lagrangian(g, tc);
  } else {
    L = t.ws.expr(t.task.at("lagrangian"));
  }
  Expr base_L = L;
  Expr F;
  bool gauged = t.task.find("gauge") != nullptr;
  if (gauged) {
    F = t.ws.expr(t.task.at("gauge"));
    L = legendre::gauge_shift(L, F, tc, t.vo());
  }

  bool regular = legendre::is_hyperregular(L, tc, t.vo());
  t.add(flag_check("hyperregular", regular));
  if (!regular) return;  // nothing downstream is defined

  legendre::LegendreMap FL = legendre::fiber_derivative(L, tc, dual, t.vo());
  OneForm theta_g = legendre::theta_g(L, tc);
  cotangent::CotangentStructure C = legendre::transport_theta(FL, theta_g, t.vo());

  t.add(zero_family("roundtrip", legendre::theta_roundtrip_residuals(FL, theta_g, C), t.zo()));

  if (t.task.find("expect-theta")) {
    const OneForm& want = t.ws.oneform(t.task.at("expect-theta"));
    std::vector<Expr> diff;
    for (int i = 0; i < dual.dim(); ++i)
      diff.push_back(Expr::sum({C.theta.comps[i], Expr::product({Expr(-1), want.comps[i]})}));
    t.add(zero_family("theta-match", diff, t.zo()));
  }

  if (t.task.find("zero-section")) {
    auto bind = parse_bindings(t.ws, t.task, "zero-section");
    std::vector<Expr> on_section;
    for (const Expr& comp : C.delta.comps) on_section.push_back(comp.substitute(bind));
    t.add(zero_family("zero-section", on_section, t.zo()));
  }

  StructureReport sr = cotangent::verify_cotangent_structure(C, t.vo());
  if (!gauged) {
    t.add_report(sr);
    return;
  }
  // A gauge term translates the dual zero section, so the transported grading
  // field sits off the canonical pairing by construction; what must hold
  // instead is that the map is the plain one composed with p -> p + dF.
  for (const CheckResult& c : sr.checks)
    if (c.id != "delta-compat") t.add(c);
  legendre::LegendreMap FL0 = legendre::fiber_derivative(base_L, tc, dual, t.vo());
  std::vector<Expr> shift;
  for (int k = 0; k < tc.pairs(); ++k) {
    Expr want = Expr::sum({FL0.map.forward[tc.pairs() + k], F.diff(tc.base[k])});
    shift.push_back(Expr::sum({FL.map.forward[tc.pairs() + k], Expr::product({Expr(-1), want})}));
  }
  t.add(zero_family("gauge-translation", shift, t.zo()));
}

void run_foul(TaskRun& t) {
  legendre::FiberedChart tc = fibered_chart(t.ws, t.task);
  const Chart& dual = t.ws.chart(t.task.at("dual-chart"));
  legendre::LegendreMap FL1 =
      legendre::fiber_derivative(t.ws.expr(t.task.at("lagrangian1")), tc, dual, t.vo());
  legendre::LegendreMap FL2 =
      legendre::fiber_derivative(t.ws.expr(t.task.at("lagrangian2")), tc, dual, t.vo());
  legendre::FoulingResult fr = legendre::fouling_composition(FL1, FL2, t.vo());

  if (t.task.find("expect-forward")) {
    std::vector<Expr> want = t.ws.expr_list(t.task.at("expect-forward"));
    if (static_cast<int>(want.size()) != dual.dim()) spec_fault(t.task, "expect-forward size");
    std::vector<Expr> diff;
    for (int i = 0; i < dual.dim(); ++i)
      diff.push_back(Expr::sum({fr.map.forward[i], Expr::product({Expr(-1), want[i]})}));
    t.add(zero_family("compose", diff, t.zo()));
  }
  bool expected = t.task.find("expect-preserves") ? parse_bool(t.task, "expect-preserves") : true;
  t.add(flag_check("canonical", fr.preserves_canonical == expected,
                   fr.preserves_canonical ? "canonical one-form kept" : "canonical one-form moved"));
}

void run_hamiltonian(TaskRun& t) {
  const auto& C = t.ws.cotangent_structure(t.task.at("structure"));
  Expr H = t.ws.expr(t.task.at("h"));

  std::optional<cotangent::PoissonBivector> lambda;
  std::optional<VectorField> gamma;
  std::string err;
  try {
    lambda = cotangent::poisson_from_omega(C.omega, t.vo());
    gamma = cotangent::hamiltonian_field(H, C.omega, t.vo());
  } catch (const Error& e) {
    err = e.what();  // degenerate omega: report it, do not abort the run
  }
  if (!lambda) {
    t.add(flag_check("field", false, err));
    return;
  }
  if (!gamma) {
    t.add(flag_check("field", false, err));
  } else if (t.task.find("expect")) {
    const VectorField& want = t.ws.vectorfield(t.task.at("expect"));
    std::vector<Expr> diff;
    for (int i = 0; i < C.chart.dim(); ++i)
      diff.push_back(Expr::sum({gamma->comps[i], Expr::product({Expr(-1), want.comps[i]})}));
    t.add(zero_family("field", diff, t.zo()));
  } else {
    t.add(flag_check("field", true));
  }

  t.add(zero_family("jacobi", cotangent::jacobi_residuals(*lambda), t.zo()));

  if (t.task.find("map") && gamma) {
    cotangent::AlternativeDescription ad = cotangent::alternative_hamiltonian_description(
        t.ws.coordmap(t.task.at("map")), *lambda, H, t.vo());
    t.add(flag_check("alternative", ad.matches));
  }
}

}  // namespace

const std::vector<std::string>& task_kinds() {
  static const std::vector<std::string> kinds = {
      "verify-tangent", "verify-cotangent", "vertical",  "sode",
      "build-s",        "legendre",         "foul",      "hamiltonian"};
  return kinds;
}

Report run_tasks(const SpecFile& spec, const std::string& command, const RunOptions& opt) {
  if (command != "report-all" &&
      std::find(task_kinds().begin(), task_kinds().end(), command) == task_kinds().end())
    throw ParseError(0, "unknown command: " + command);

  Workspace ws(spec, opt);
  Report report;
  report.seed = opt.verify.domain.seed;
  report.algebraic_tol = opt.verify.algebraic;
  report.finite_difference_tol = opt.verify.finite_difference;

  for (const Section* s : spec.of_kind("task")) {
    const std::string& kind = s->at("kind");
    if (std::find(task_kinds().begin(), task_kinds().end(), kind) == task_kinds().end())
      spec_fault(*s, "unknown task kind: " + kind);
    if (command != "report-all" && kind != command) continue;

    TaskRun t{ws, *s, {}};
    auto t0 = std::chrono::steady_clock::now();
    if (kind == "verify-tangent") run_verify_tangent(t);
    else if (kind == "verify-cotangent") run_verify_cotangent(t);
    else if (kind == "vertical") run_vertical(t);
    else if (kind == "sode") run_sode(t);
    else if (kind == "build-s") run_build_s(t);
    else if (kind == "legendre") run_legendre(t);
    else if (kind == "foul") run_foul(t);
    else run_hamiltonian(t);
    auto t1 = std::chrono::steady_clock::now();

    // elapsed time is measured per task and repeated on each of its rows;
    // zero by default so reports stay byte-stable
    double ms = opt.timings ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
    const std::string* ref = s->find("ref");
    for (CheckResult& c : t.checks) {
      TaskEntry e;
      e.name = s->name + "/" + c.id;
      e.paper_ref = ref ? *ref : "";
      e.verdict = c.verdict;
      e.max_abs_residual = c.max_abs_residual;
      e.max_rel_residual = c.max_rel_residual;
      e.elapsed_ms = ms;
      report.tasks.push_back(std::move(e));
    }
  }
  return report;
}

}  // namespace bundlecheck::cli
