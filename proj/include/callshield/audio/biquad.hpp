#pragma once

#include <span>
#include <vector>

namespace callshield::audio {

// Normalized so that a0 = 1.
struct BiquadCoeffs {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
};

// Second-order sections from the RBJ audio-EQ cookbook. Q = 1/sqrt(2) gives Butterworth.
BiquadCoeffs butterworth_lowpass(double cutoff_hz, double sample_rate);
BiquadCoeffs butterworth_highpass(double cutoff_hz, double sample_rate);
// Constant 0 dB peak gain band-pass.
BiquadCoeffs resonator_bandpass(double center_hz, double q, double sample_rate);

// Direct form I filter state.
class Biquad {
 public:
  explicit Biquad(const BiquadCoeffs& c) : c_(c) {}
  double process(double x) noexcept {
    const double y = c_.b0 * x + c_.b1 * x1_ + c_.b2 * x2_ - c_.a1 * y1_ - c_.a2 * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }
  void reset() noexcept { x1_ = x2_ = y1_ = y2_ = 0.0; }

 private:
  BiquadCoeffs c_;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

std::vector<double> filter(const BiquadCoeffs& c, std::span<const double> x);

}  // namespace callshield::audio
