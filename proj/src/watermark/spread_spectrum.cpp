#include "callshield/watermark/spread_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "callshield/errors.hpp"
#include "callshield/rng.hpp"

namespace callshield::watermark {

namespace {

void check_frame(std::span<const double> frame) {
  if (frame.size() != kFrameSamples) {
    throw FrameSizeError("frame has " + std::to_string(frame.size()) + " samples, expected 320");
  }
}

}  // namespace

Bitstream hard_bits(const DecodedBits& bits) {
  Bitstream out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i].bit;
  return out;
}

std::vector<double> pn_sequence(std::uint64_t pn_seed) {
  Rng rng(derive_seed(pn_seed, {label_hash("pn")}));
  std::vector<double> pn(kFrameSamples);
  for (auto& c : pn) c = (rng.next() >> 63) != 0 ? 1.0 : -1.0;
  return pn;
}

double confidence_from_z(double z) { return std::clamp((std::abs(z) - 2.0) / 6.0, 0.0, 1.0); }

SpreadSpectrumCodec::SpreadSpectrumCodec(std::uint64_t pn_seed, double gain) : pn_(pn_sequence(pn_seed)), gain_(gain) {}

PcmFrame SpreadSpectrumCodec::embed(std::span<const double> frame, std::uint8_t bit, double alpha) const {
  check_frame(frame);
  const double a = (bit != 0 ? 1.0 : -1.0) * alpha * gain_;
  PcmFrame out(kFrameSamples);
  for (std::size_t i = 0; i < kFrameSamples; ++i) out[i] = std::clamp(frame[i] + a * pn_[i], -1.0, 1.0);
  return out;
}

double SpreadSpectrumCodec::z_score(std::span<const double> frame) const {
  check_frame(frame);
  double dot = 0.0;
  double energy = 0.0;
  for (std::size_t i = 0; i < kFrameSamples; ++i) {
    dot += frame[i] * pn_[i];
    energy += frame[i] * frame[i];
  }
  if (energy <= 0.0) return 0.0;
  // rho = dot / (|frame| * sqrt(320)), z = rho * sqrt(320)
  return dot / std::sqrt(energy);
}

DecodedBit SpreadSpectrumCodec::decode(std::span<const double> frame) const {
  const double z = z_score(frame);
  return {static_cast<std::uint8_t>(z > 0.0 ? 1 : 0), confidence_from_z(z)};
}

audio::PcmSignal SpreadSpectrumCodec::embed_stream(const Bitstream& bits, const audio::PcmSignal& carrier, double alpha) const {
  const std::size_t needed = bits.size() * kFrameSamples;
  if (carrier.size() < needed) {
    throw CarrierTooShortError("carrier has " + std::to_string(carrier.size()) + " samples, " + std::to_string(needed) + " needed");
  }
  audio::PcmSignal out = carrier;
  for (std::size_t f = 0; f < bits.size(); ++f) {
    const std::span<const double> in(carrier.samples.data() + f * kFrameSamples, kFrameSamples);
    const auto marked = embed(in, bits[f], alpha);
    std::copy(marked.begin(), marked.end(), out.samples.begin() + static_cast<std::ptrdiff_t>(f * kFrameSamples));
  }
  return out;
}

DecodedBits SpreadSpectrumCodec::decode_stream(const audio::PcmSignal& signal, std::size_t offset_frames, std::size_t n_bits,
                                               std::size_t phase_samples) const {
  const std::size_t start = phase_samples + offset_frames * kFrameSamples;
  if (signal.size() < start + n_bits * kFrameSamples) {
    throw CarrierTooShortError("signal too short to decode " + std::to_string(n_bits) + " frames at the requested offset");
  }
  DecodedBits out(n_bits);
  for (std::size_t f = 0; f < n_bits; ++f) {
    out[f] = decode(std::span<const double>(signal.samples.data() + start + f * kFrameSamples, kFrameSamples));
  }
  return out;
}

std::size_t SpreadSpectrumCodec::coarse_align(const audio::PcmSignal& signal, std::size_t max_frames) const {
  if (signal.size() < 2 * kFrameSamples) return 0;
  const std::size_t frames = std::min(max_frames, signal.size() / kFrameSamples - 1);
  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t phase = 0; phase < kFrameSamples; ++phase) {
    double score = 0.0;
    for (std::size_t f = 0; f < frames; ++f) {
      score += std::abs(z_score(std::span<const double>(signal.samples.data() + phase + f * kFrameSamples, kFrameSamples)));
    }
    if (score > best_score) {
      best_score = score;
      best = phase;
    }
  }
  return best;
}

PcmFrame ss_embed(std::span<const double> frame, std::uint8_t bit, double alpha, std::uint64_t pn_seed) {
  return SpreadSpectrumCodec(pn_seed).embed(frame, bit, alpha);
}

DecodedBit ss_decode(std::span<const double> frame, std::uint64_t pn_seed) { return SpreadSpectrumCodec(pn_seed).decode(frame); }

}  // namespace callshield::watermark
