#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bundlecheck/cli/specfile.hpp"
#include "bundlecheck/cotangent/cotangent.hpp"
#include "bundlecheck/legendre/legendre.hpp"
#include "bundlecheck/report.hpp"

namespace bundlecheck::cli {

// One row of the final report: a task/check pair with its verdict.
struct TaskEntry {
  std::string name;       // "taskname/checkid"
  std::string paper_ref;  // the task's 'ref =' attribute, may be empty
  Verdict verdict = Verdict::Pass;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  double elapsed_ms = 0.0;
};

struct Report {
  std::uint64_t seed = numcheck::kDefaultSeed;
  double algebraic_tol = numcheck::kAlgebraicTol;
  double finite_difference_tol = numcheck::kFiniteDiffTol;
  std::vector<TaskEntry> tasks;

  bool all_pass(bool strict = false) const;
};

struct RunOptions {
  numcheck::VerifyOptions verify;
  bool strict = false;
  bool timings = false;  // real elapsed_ms (breaks byte-stable output)
};

// Everything a spec file declares, realized: charts, opaque realizations,
// named expressions/fields/forms/tensors/maps and assembled structures.
// Expression-valued keys resolve [expr name] references first, then parse
// the text inline.
class Workspace {
 public:
  Workspace(const SpecFile& spec, const RunOptions& opt);

  const geom::Chart& chart(const std::string& name) const;
  sym::Expr expr(const std::string& text) const;
  std::vector<sym::Expr> expr_list(const std::string& text) const;
  const geom::VectorField& vectorfield(const std::string& name) const;
  const geom::OneForm& oneform(const std::string& name) const;
  const geom::Tensor11& tensor(const std::string& name) const;
  const geom::CoordinateMap& coordmap(const std::string& name) const;
  const bundle::TangentStructure& tangent(const std::string& name) const;
  const cotangent::CotangentStructure& cotangent_structure(const std::string& name) const;
  const legendre::Metric& metric(const std::string& name) const;

  // VerifyOptions with the realized opaque table merged into the domain.
  const numcheck::VerifyOptions& verify() const { return verify_; }
  const RunOptions& options() const { return opt_; }

 private:
  RunOptions opt_;
  numcheck::VerifyOptions verify_;
  std::map<std::string, geom::Chart> charts_;
  std::map<std::string, sym::Expr> exprs_;
  std::map<std::string, geom::VectorField> fields_;
  std::map<std::string, geom::OneForm> oneforms_;
  std::map<std::string, geom::Tensor11> tensors_;
  std::map<std::string, geom::CoordinateMap> maps_;
  std::map<std::string, bundle::TangentStructure> tangents_;
  std::map<std::string, cotangent::CotangentStructure> cotangents_;
  std::map<std::string, legendre::Metric> metrics_;
};

// Task kinds mirror the CLI command names. run_tasks executes the spec's
// tasks in file order; `command` filters to one kind ("report-all" runs
// everything). Each task expands to one entry per sub-check, named
// "taskname/checkid". Internal faults surface as Error; input problems as
// ParseError.
Report run_tasks(const SpecFile& spec, const std::string& command, const RunOptions& opt);

const std::vector<std::string>& task_kinds();

}  // namespace bundlecheck::cli
