#pragma once

// Seeded sampling of jet points and a small index-parallel loop. Uniform
// draws use the top 53 bits of mt19937_64 directly so that sequences are
// identical across standard libraries.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "jetlag/jet.hpp"

namespace jetlag {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

/// Per-coordinate intervals for t, x and v (v in flat i-major order).
struct SamplingBox {
  std::vector<Interval> t, x, v;

  static SamplingBox uniform(const Dims& d, Interval all = {});
  void validate(const Dims& d) const;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  double uniform(const Interval& iv) { return uniform(iv.lo, iv.hi); }
  JetPoint draw(const Dims& d, const SamplingBox& box);
  /// Redraw only the velocities of pt.
  void redraw_velocity(JetPoint& pt, const SamplingBox& box);

 private:
  std::mt19937_64 rng_;
};

/// Worker count from JETLAG_THREADS (default 1).
unsigned worker_count();

/// Run fn(k) for k in [0, count) on worker_count() threads. Each index is
/// handled exactly once; results must be written to per-index slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace jetlag
