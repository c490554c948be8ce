#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "callshield/audio/pcm.hpp"

namespace callshield::audio {

enum class DistortionKind { clean, white_noise, pink_noise, echo, lowpass, highpass, bandpass, duck };

/// All kinds in a fixed order (clean first).
const std::vector<DistortionKind>& all_distortion_kinds();
std::string_view to_string(DistortionKind kind);
/// Accepts the canonical names plus the short forms "white" and "pink".
std::optional<DistortionKind> parse_distortion_kind(std::string_view name);

/// Inclusive uniform ranges drawn per application.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct DistortionParams {
  Range snr_db{10.0, 30.0};            // white and pink noise, relative to segment power
  Range echo_delay_ms{100.0, 500.0};
  Range echo_attenuation{0.2, 0.5};
  Range lowpass_hz{2000.0, 3500.0};
  Range highpass_hz{300.0, 800.0};
  Range bandpass_low_hz{300.0, 800.0};   // high-pass corner
  Range bandpass_high_hz{2000.0, 3000.0};  // low-pass corner
  Range duck_gain{0.1, 0.4};
  int segments = 1;  // > 1 scatters the coverage over that many disjoint pieces
};

struct DistortionSpec {
  DistortionKind kind = DistortionKind::clean;
  double coverage = 0.0;  // fraction of the signal duration, in [0, 1]
  DistortionParams params;
  std::uint64_t rng_seed = 0;
};

/// Parameter values actually drawn for one application, for the results files.
struct RealizedDistortion {
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // [begin, end) sample ranges
  double snr_db = 0.0;
  double echo_delay_ms = 0.0;
  double echo_attenuation = 0.0;
  double cutoff_low_hz = 0.0;
  double cutoff_high_hz = 0.0;
  double duck_gain = 0.0;
  std::size_t clipped_samples = 0;
};

struct DistortedSignal {
  PcmSignal signal;
  RealizedDistortion realized;
};

/// Distorts one contiguous, uniformly placed segment covering `coverage` of
/// the signal. Filters and echo run over the whole input so the segment sees
/// a settled filter state, then only the segment is spliced into the output.
/// Samples outside the segment are returned bit-identical. Segment samples
/// are clamped to [-1, 1]; the clip count is reported.
DistortedSignal distort(const PcmSignal& signal, const DistortionSpec& spec);
PcmSignal apply_distortion(const PcmSignal& signal, const DistortionSpec& spec);

struct DelaySpec {
  double max_delay_ms = 120.0;
};

struct DelayedSignal {
  PcmSignal signal;
  std::size_t delay_samples = 0;
};

/// delay_samples = round(U[0, max_delay_ms] * 8); that many zeros are prepended.
std::size_t draw_delay_samples(const DelaySpec& spec, std::uint64_t rng_seed);
DelayedSignal apply_delay(const PcmSignal& signal, const DelaySpec& spec, std::uint64_t rng_seed);

}  // namespace callshield::audio
