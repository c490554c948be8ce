#include "callshield/audio/biquad.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace callshield::audio {

namespace {

constexpr double kButterworthQ = std::numbers::sqrt2 / 2.0;

void check_frequency(double f, double fs) {
  if (!(f > 0.0 && f < fs / 2.0)) throw std::invalid_argument("filter frequency must lie in (0, fs/2)");
}

}  // namespace

BiquadCoeffs butterworth_lowpass(double cutoff_hz, double sample_rate) {
  check_frequency(cutoff_hz, sample_rate);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * kButterworthQ);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return {(1.0 - cw) / 2.0 / a0, (1.0 - cw) / a0, (1.0 - cw) / 2.0 / a0, -2.0 * cw / a0, (1.0 - alpha) / a0};
}

BiquadCoeffs butterworth_highpass(double cutoff_hz, double sample_rate) {
  check_frequency(cutoff_hz, sample_rate);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * kButterworthQ);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return {(1.0 + cw) / 2.0 / a0, -(1.0 + cw) / a0, (1.0 + cw) / 2.0 / a0, -2.0 * cw / a0, (1.0 - alpha) / a0};
}

BiquadCoeffs resonator_bandpass(double center_hz, double q, double sample_rate) {
  check_frequency(center_hz, sample_rate);
  const double w0 = 2.0 * std::numbers::pi * center_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  return {alpha / a0, 0.0, -alpha / a0, -2.0 * std::cos(w0) / a0, (1.0 - alpha) / a0};
}

std::vector<double> filter(const BiquadCoeffs& c, std::span<const double> x) {
  Biquad bq(c);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = bq.process(x[i]);
  return y;
}

}  // namespace callshield::audio
