#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "callshield/audio/pcm.hpp"
#include "callshield/bitstream.hpp"

namespace callshield::watermark {

inline constexpr std::size_t kFrameSamples = 320;  // 40 ms at 8 kHz
inline constexpr std::uint64_t kDefaultPnSeed = 0x5eed'ca11'5b1e'1dULL;

using PcmFrame = std::vector<double>;

struct DecodedBit {
  std::uint8_t bit = 0;
  double confidence = 0.0;  // in [0, 1]
};
using DecodedBits = std::vector<DecodedBit>;

Bitstream hard_bits(const DecodedBits& bits);

/// Public +-1 chip sequence of one frame, identical at both endpoints.
std::vector<double> pn_sequence(std::uint64_t pn_seed);

/// Direct-sequence spread-spectrum watermark: one bit per 320-sample frame.
/// The chip amplitude is alpha * gain; gain 0.1 puts the watermark at -20 dBFS for alpha = 1.
class SpreadSpectrumCodec {
 public:
  explicit SpreadSpectrumCodec(std::uint64_t pn_seed = kDefaultPnSeed, double gain = 0.1);

  /// Throws FrameSizeError unless frame has 320 samples.
  PcmFrame embed(std::span<const double> frame, std::uint8_t bit, double alpha) const;
  DecodedBit decode(std::span<const double> frame) const;
  /// Normalized correlation scaled by sqrt(320); about N(0, 1) on unmarked noise.
  double z_score(std::span<const double> frame) const;

  /// Marks consecutive frames of the carrier from sample 0. Throws CarrierTooShortError.
  audio::PcmSignal embed_stream(const Bitstream& bits, const audio::PcmSignal& carrier, double alpha) const;
  /// Decodes n_bits frames starting at phase_samples + offset_frames * 320.
  DecodedBits decode_stream(const audio::PcmSignal& signal, std::size_t offset_frames, std::size_t n_bits,
                            std::size_t phase_samples = 0) const;
  /// Sample phase in [0, 320) maximizing the summed |correlation| over up to max_frames frames.
  std::size_t coarse_align(const audio::PcmSignal& signal, std::size_t max_frames) const;

  double gain() const noexcept { return gain_; }
  const std::vector<double>& pn() const noexcept { return pn_; }

 private:
  std::vector<double> pn_;
  double gain_;
};

/// Maps a correlation z-score to a confidence in [0, 1].
double confidence_from_z(double z);

PcmFrame ss_embed(std::span<const double> frame, std::uint8_t bit, double alpha, std::uint64_t pn_seed = kDefaultPnSeed);
DecodedBit ss_decode(std::span<const double> frame, std::uint64_t pn_seed = kDefaultPnSeed);

}  // namespace callshield::watermark
