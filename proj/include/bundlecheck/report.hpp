#pragma once

#include <string>
#include <vector>

namespace bundlecheck {

// Outcome of a single check. ProbablyZero means the residual vanished at every
// sampled point but could not be cancelled structurally; callers treat it as a
// pass with a warning unless running strict.
enum class Verdict { Pass, ProbablyZero, Fail };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::ProbablyZero: return "probably-zero";
    case Verdict::Fail: return "fail";
  }
  return "fail";
}

struct CheckResult {
  std::string id;       // stable machine name, e.g. "s-compose-zero"
  Verdict verdict = Verdict::Pass;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  std::string detail;   // human-readable note; offending component if any
};

struct StructureReport {
  std::vector<CheckResult> checks;

  bool all_pass(bool strict = false) const {
    for (const auto& c : checks) {
      if (c.verdict == Verdict::Fail) return false;
      if (strict && c.verdict == Verdict::ProbablyZero) return false;
    }
    return true;
  }
  const CheckResult* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

}  // namespace bundlecheck
