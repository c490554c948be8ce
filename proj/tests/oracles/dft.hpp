#pragma once

// Direct O(N^2) DFT; slow but shares no code with the signal path.

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

// Sum of |X[k]|^2 over bins whose frequency lies in [f_lo, f_hi].
inline double band_energy(const std::vector<double>& x, double fs, double f_lo, double f_hi) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    if (f < f_lo || f > f_hi) continue;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = 2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
      re += x[i] * std::cos(ph);
      im -= x[i] * std::sin(ph);
    }
    total += re * re + im * im;
  }
  return total;
}

}  // namespace oracle
