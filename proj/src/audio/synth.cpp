#include "callshield/audio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "callshield/audio/biquad.hpp"
#include "callshield/rng.hpp"

namespace callshield::audio {

PcmSignal synth_speech_like(double seconds, std::uint64_t seed, const SpeechLikeParams& params) {
  const auto n = static_cast<std::size_t>(std::llround(std::max(seconds, 0.0) * kSampleRate));
  PcmSignal out(n);
  Rng rng(seed);
  auto& y = out.samples;

  std::size_t pos = 0;
  while (pos < n) {
    const auto len = std::min(n - pos, static_cast<std::size_t>(rng.uniform(params.min_syllable_s, params.max_syllable_s) * kSampleRate));
    if (rng.bernoulli(params.pause_probability)) {
      for (std::size_t i = 0; i < len; ++i) y[pos + i] = 0.002 * rng.normal();
      pos += len;
      continue;
    }
    const double f0 = rng.uniform(90.0, 220.0);
    Biquad f1(resonator_bandpass(rng.uniform(300.0, 900.0), 5.0, kSampleRate));
    Biquad f2(resonator_bandpass(rng.uniform(900.0, 2300.0), 6.0, kSampleRate));
    Biquad f3(resonator_bandpass(rng.uniform(2300.0, 3400.0), 7.0, kSampleRate));
    double phase = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      phase += f0 / kSampleRate;
      double excitation = 0.3 * rng.normal();
      if (phase >= 1.0) {
        phase -= 1.0;
        excitation += 4.0;
      }
      const double env = std::sin(std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(len));
      y[pos + i] = env * (f1.process(excitation) + 0.6 * f2.process(excitation) + 0.3 * f3.process(excitation));
    }
    pos += len;
  }

  const double r = rms(y, 0, y.size());
  if (r > 0.0) {
    const double g = params.target_rms / r;
    for (auto& v : y) v = std::clamp(v * g, -0.95, 0.95);
  }
  return out;
}

}  // namespace callshield::audio
