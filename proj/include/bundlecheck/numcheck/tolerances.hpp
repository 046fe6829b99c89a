#pragma once

#include <cstdint>

// Every default tolerance and sampling constant lives here so the symbolic
// and numeric layers can't drift apart.
namespace bundlecheck::numcheck {

inline constexpr double kAlgebraicTol = 1e-9;       // relative, exact identities
inline constexpr double kFiniteDiffTol = 1e-5;      // relative, flow transport checks
inline constexpr double kRankTolFactor = 1e-9;      // singular values below this * sigma_max count as zero
inline constexpr double kFlowStep = 1e-5;           // h for flow transport differencing
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;
inline constexpr int kDefaultSampleCount = 25;
inline constexpr double kSampleLo = 0.1;            // coordinates are drawn with
inline constexpr double kSampleHi = 2.0;            // |x| in [lo, hi], either sign
inline constexpr int kResampleFactor = 10;          // domain-error retry budget

}  // namespace bundlecheck::numcheck
