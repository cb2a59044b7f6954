#pragma once

#include "nilflow/metric.hpp"

#include <cstdint>

namespace nilflow {

/// splitmix64: fixed 64-bit generator so that seeded experiments reproduce
/// across platforms and standard libraries.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

/// Diagonal metric with entries log-uniform in [lo, hi].
MetricState random_diag_metric(int dim, std::uint64_t seed, double lo = 0.1, double hi = 10.0);

/// Well-conditioned random symmetric positive-definite metric with entries O(1).
MetricState random_full_metric(int dim, std::uint64_t seed);

}  // namespace nilflow
