#include "callshield/audio/distortion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "callshield/audio/biquad.hpp"
#include "callshield/rng.hpp"

namespace callshield::audio {

namespace {

constexpr double kPowerFloor = 1e-8;  // keeps noise defined on silent segments

double draw(Rng& rng, const Range& r) { return r.hi > r.lo ? rng.uniform(r.lo, r.hi) : r.lo; }

std::vector<std::pair<std::size_t, std::size_t>> place_segments(std::size_t n, double coverage, int pieces, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto total = static_cast<std::size_t>(std::llround(coverage * static_cast<double>(n)));
  if (total == 0) return out;
  if (pieces <= 1) {
    const std::size_t start = rng.below(n - total + 1);
    out.emplace_back(start, start + total);
    return out;
  }
  const std::size_t slot = n / static_cast<std::size_t>(pieces);
  const std::size_t piece = std::min(slot, total / static_cast<std::size_t>(pieces));
  if (piece == 0) throw std::invalid_argument("too many segments for this signal length");
  for (int i = 0; i < pieces; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * slot;
    const std::size_t start = base + rng.below(slot - piece + 1);
    out.emplace_back(start, start + piece);
  }
  return out;
}

void check_spec(const DistortionSpec& spec) {
  if (!(spec.coverage >= 0.0 && spec.coverage <= 1.0)) throw std::invalid_argument("coverage must be in [0, 1]");
  if (spec.params.segments < 1) throw std::invalid_argument("segments must be >= 1");
}

// Pink noise by Paul Kellett's economy filter bank, roughly -3 dB/octave.
std::vector<double> pink_noise(std::size_t n, Rng& rng) {
  std::array<double, 7> b{};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rng.normal();
    b[0] = 0.99886 * b[0] + w * 0.0555179;
    b[1] = 0.99332 * b[1] + w * 0.0750759;
    b[2] = 0.96900 * b[2] + w * 0.1538520;
    b[3] = 0.86650 * b[3] + w * 0.3104856;
    b[4] = 0.55000 * b[4] + w * 0.5329522;
    b[5] = -0.7616 * b[5] - w * 0.0168980;
    out[i] = b[0] + b[1] + b[2] + b[3] + b[4] + b[5] + b[6] + w * 0.5362;
    b[6] = w * 0.115926;
  }
  return out;
}

}  // namespace

const std::vector<DistortionKind>& all_distortion_kinds() {
  static const std::vector<DistortionKind> kinds = {
      DistortionKind::clean,   DistortionKind::white_noise, DistortionKind::pink_noise, DistortionKind::echo,
      DistortionKind::lowpass, DistortionKind::highpass,    DistortionKind::bandpass,   DistortionKind::duck};
  return kinds;
}

std::string_view to_string(DistortionKind kind) {
  switch (kind) {
    case DistortionKind::clean: return "clean";
    case DistortionKind::white_noise: return "white_noise";
    case DistortionKind::pink_noise: return "pink_noise";
    case DistortionKind::echo: return "echo";
    case DistortionKind::lowpass: return "lowpass";
    case DistortionKind::highpass: return "highpass";
    case DistortionKind::bandpass: return "bandpass";
    case DistortionKind::duck: return "duck";
  }
  return "unknown";
}

std::optional<DistortionKind> parse_distortion_kind(std::string_view name) {
  if (name == "white") return DistortionKind::white_noise;
  if (name == "pink") return DistortionKind::pink_noise;
  for (auto k : all_distortion_kinds()) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

DistortedSignal distort(const PcmSignal& signal, const DistortionSpec& spec) {
  check_spec(spec);
  if (signal.empty()) throw std::invalid_argument("cannot distort an empty signal");
  DistortedSignal out{signal, {}};
  if (spec.kind == DistortionKind::clean || spec.coverage == 0.0) return out;

  Rng rng(spec.rng_seed);
  auto& real = out.realized;
  real.segments = place_segments(signal.size(), spec.coverage, spec.params.segments, rng);
  if (real.segments.empty()) return out;

  const auto& x = signal.samples;
  const double fs = signal.sample_rate;
  const auto& p = spec.params;
  std::vector<double> processed;  // whole-signal version, spliced per segment

  switch (spec.kind) {
    case DistortionKind::clean:
      break;
    case DistortionKind::white_noise:
    case DistortionKind::pink_noise: {
      real.snr_db = draw(rng, p.snr_db);
      processed = x;
      for (const auto& [b, e] : real.segments) {
        const double target = std::max(mean_power(x, b, e), kPowerFloor) / std::pow(10.0, real.snr_db / 10.0);
        std::vector<double> noise;
        if (spec.kind == DistortionKind::pink_noise) {
          noise = pink_noise(e - b, rng);
        } else {
          noise.resize(e - b);
          for (auto& v : noise) v = rng.normal();
        }
        const double scale = std::sqrt(target / std::max(mean_power(noise, 0, noise.size()), 1e-30));
        for (std::size_t i = b; i < e; ++i) processed[i] = x[i] + scale * noise[i - b];
      }
      break;
    }
    case DistortionKind::echo: {
      real.echo_delay_ms = draw(rng, p.echo_delay_ms);
      real.echo_attenuation = draw(rng, p.echo_attenuation);
      const auto lag = static_cast<std::size_t>(std::llround(real.echo_delay_ms * fs / 1000.0));
      processed = x;
      for (std::size_t i = lag; i < x.size(); ++i) processed[i] += real.echo_attenuation * x[i - lag];
      break;
    }
    case DistortionKind::lowpass:
      real.cutoff_high_hz = draw(rng, p.lowpass_hz);
      processed = filter(butterworth_lowpass(real.cutoff_high_hz, fs), x);
      break;
    case DistortionKind::highpass:
      real.cutoff_low_hz = draw(rng, p.highpass_hz);
      processed = filter(butterworth_highpass(real.cutoff_low_hz, fs), x);
      break;
    case DistortionKind::bandpass:
      real.cutoff_low_hz = draw(rng, p.bandpass_low_hz);
      real.cutoff_high_hz = draw(rng, p.bandpass_high_hz);
      processed = filter(butterworth_lowpass(real.cutoff_high_hz, fs), filter(butterworth_highpass(real.cutoff_low_hz, fs), x));
      break;
    case DistortionKind::duck:
      real.duck_gain = draw(rng, p.duck_gain);
      processed.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) processed[i] = real.duck_gain * x[i];
      break;
  }

  auto& y = out.signal.samples;
  for (const auto& [b, e] : real.segments) {
    for (std::size_t i = b; i < e; ++i) {
      const double v = processed[i];
      if (v > 1.0 || v < -1.0) ++real.clipped_samples;
      y[i] = std::clamp(v, -1.0, 1.0);
    }
  }
  return out;
}

PcmSignal apply_distortion(const PcmSignal& signal, const DistortionSpec& spec) { return distort(signal, spec).signal; }

std::size_t draw_delay_samples(const DelaySpec& spec, std::uint64_t rng_seed) {
  if (!(spec.max_delay_ms >= 0.0)) throw std::invalid_argument("max_delay_ms must be >= 0");
  Rng rng(rng_seed);
  const double ms = rng.uniform(0.0, spec.max_delay_ms);
  return static_cast<std::size_t>(std::llround(ms * kSampleRate / 1000.0));
}

DelayedSignal apply_delay(const PcmSignal& signal, const DelaySpec& spec, std::uint64_t rng_seed) {
  DelayedSignal out;
  out.delay_samples = draw_delay_samples(spec, rng_seed);
  out.signal.samples.assign(out.delay_samples, 0.0);
  out.signal.samples.insert(out.signal.samples.end(), signal.samples.begin(), signal.samples.end());
  return out;
}

}  // namespace callshield::audio
