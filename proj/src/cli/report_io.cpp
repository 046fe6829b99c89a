#include "bundlecheck/cli/report_io.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace bundlecheck::cli {

std::string render_json(const Report& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["conventions"]["omega_sign"] = kOmegaSignConvention;
  j["conventions"]["hamiltonian_sign"] = kHamiltonianSignConvention;
  j["seed"] = report.seed;
  j["tolerances"]["algebraic"] = report.algebraic_tol;
  j["tolerances"]["finite_difference"] = report.finite_difference_tol;
  j["tasks"] = nlohmann::ordered_json::array();
  for (const TaskEntry& t : report.tasks) {
    nlohmann::ordered_json e;
    e["name"] = t.name;
    e["paper_ref"] = t.paper_ref;
    e["verdict"] = verdict_name(t.verdict);
    e["max_abs_residual"] = t.max_abs_residual;
    e["max_rel_residual"] = t.max_rel_residual;
    e["elapsed_ms"] = t.elapsed_ms;
    j["tasks"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string render_text(const Report& report) {
  std::ostringstream out;
  out << "seed " << report.seed << "  tolerances " << report.algebraic_tol << " (algebraic) "
      << report.finite_difference_tol << " (finite difference)\n";
  out << "conventions: " << kOmegaSignConvention << "; " << kHamiltonianSignConvention << "\n";

  std::size_t name_w = 4, ref_w = 3;
  for (const TaskEntry& t : report.tasks) {
    name_w = std::max(name_w, t.name.size());
    ref_w = std::max(ref_w, t.paper_ref.size());
  }
  out << std::left << std::setw(static_cast<int>(name_w) + 2) << "name"
      << std::setw(static_cast<int>(ref_w) + 2) << "ref" << std::setw(15) << "verdict"
      << std::setw(13) << "max_abs" << std::setw(13) << "max_rel" << "ms\n";
  for (const TaskEntry& t : report.tasks) {
    std::ostringstream abs_s, rel_s, ms_s;
    abs_s << std::scientific << std::setprecision(3) << t.max_abs_residual;
    rel_s << std::scientific << std::setprecision(3) << t.max_rel_residual;
    ms_s << std::fixed << std::setprecision(3) << t.elapsed_ms;
    out << std::left << std::setw(static_cast<int>(name_w) + 2) << t.name
        << std::setw(static_cast<int>(ref_w) + 2) << t.paper_ref << std::setw(15)
        << verdict_name(t.verdict) << std::setw(13) << abs_s.str() << std::setw(13) << rel_s.str()
        << ms_s.str() << "\n";
  }
  out << (report.all_pass(false) ? "all checks passed" : "FAILURES PRESENT") << " ("
      << report.tasks.size() << " entries)\n";
  return out.str();
}

}  // namespace bundlecheck::cli
