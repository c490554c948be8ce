#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace callshield::audio {

inline constexpr int kSampleRate = 8000;

/// Mono narrowband signal; samples are nominally in [-1, 1].
struct PcmSignal {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  PcmSignal() = default;
  explicit PcmSignal(std::vector<double> s) : samples(std::move(s)) {}
  explicit PcmSignal(std::size_t n) : samples(n, 0.0) {}

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration_seconds() const noexcept { return static_cast<double>(samples.size()) / sample_rate; }
};

/// Reads a RIFF/WAVE file holding 16-bit PCM, mono, 8 kHz.
/// Throws FormatError naming the offending property otherwise.
PcmSignal load_wav(const std::filesystem::path& path);

/// Writes 16-bit PCM mono 8 kHz; samples are clamped to [-1, 1) and rounded.
void save_wav(const PcmSignal& signal, const std::filesystem::path& path);

double rms(const std::vector<double>& x, std::size_t begin, std::size_t end);
double mean_power(const std::vector<double>& x, std::size_t begin, std::size_t end);

}  // namespace callshield::audio
