#pragma once

#include <random>

namespace bundlecheck::numcheck {

// Hand-rolled uniform mapping so results are identical across standard
// libraries for a fixed seed.
inline double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Magnitude uniform in [lo, hi], sign from one extra draw. Keeping every
// coordinate away from zero avoids spurious singular points.
inline double draw_coordinate(std::mt19937_64& rng, double lo, double hi) {
  double mag = lo + unit_real(rng) * (hi - lo);
  return (rng() & 1u) ? mag : -mag;
}

}  // namespace bundlecheck::numcheck
