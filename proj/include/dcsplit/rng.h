#pragma once

#include <cstdint>
#include <random>

#include "dcsplit/types.h"

namespace dcsplit {

// Seeded generator whose output does not depend on the standard library's
// distribution implementations, so reports are reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Index below(Index n) { return static_cast<Index>(next() % static_cast<std::uint64_t>(n)); }

  Vec uniform_in_box(const Vec& lo, const Vec& hi) {
    Vec x(lo.size());
    for (Index i = 0; i < lo.size(); ++i) x[i] = uniform(lo[i], hi[i]);
    return x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dcsplit
