#pragma once

#include <string>

#include "bundlecheck/cli/runner.hpp"

namespace bundlecheck::cli {

// Fixed strings recorded in every report header: the two orientation choices
// the whole library is built around.
inline constexpr const char* kOmegaSignConvention = "omega = -d(theta)";
inline constexpr const char* kHamiltonianSignConvention = "i_Gamma omega = dH";

inline constexpr int kReportSchemaVersion = 1;

// JSON rendering, stable field order, two-space indent, trailing newline.
// Byte-identical across runs of the same inputs and seed as long as timings
// stay disabled.
std::string render_json(const Report& report);

// Aligned table for terminals, same content.
std::string render_text(const Report& report);

}  // namespace bundlecheck::cli
