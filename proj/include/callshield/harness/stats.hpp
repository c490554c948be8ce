#pragma once

#include <cstdint>

namespace callshield::harness {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Wilson score interval for k successes in n trials (z = 1.96 for 95%).
Interval wilson_interval(std::int64_t k, std::int64_t n, double z = 1.96);

struct RateEstimate {
  std::int64_t successes = 0;
  std::int64_t trials = 0;

  void add(bool ok) {
    ++trials;
    successes += ok ? 1 : 0;
  }
  void add(std::int64_t k, std::int64_t n) {
    successes += k;
    trials += n;
  }
  double value() const { return trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
  Interval ci() const { return wilson_interval(successes, trials); }
};

}  // namespace callshield::harness
