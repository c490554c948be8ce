#include "callshield/watermark/frame_channel.hpp"

#include <cmath>

#include "callshield/audio/synth.hpp"
#include "callshield/rng.hpp"
#include "callshield/watermark/bsc.hpp"

namespace callshield::watermark {

std::string_view to_string(Backend b) { return b == Backend::statistical ? "statistical" : "spread_spectrum"; }

std::optional<Backend> parse_backend(std::string_view name) {
  if (name == "statistical" || name == "bsc") return Backend::statistical;
  if (name == "spread_spectrum" || name == "signal" || name == "ss") return Backend::spread_spectrum;
  return std::nullopt;
}

StatisticalChannel::StatisticalChannel(ChannelCalibration calibration) : calibration_(std::move(calibration)) {}

Reception StatisticalChannel::transmit(const Bitstream& on_air, const TransmitOptions& options) const {
  const double p = calibration_.crossover(options.condition);
  const double q = calibration_.idle_one_probability();
  Reception rx;
  rx.delay_samples = audio::draw_delay_samples(options.delay, derive_seed(options.seed, {label_hash("delay")}));
  rx.true_offset = rx.delay_samples / kFrameSamples;
  rx.frame_aligned = options.timing_recovery || rx.delay_samples % kFrameSamples == 0;

  const std::size_t window = std::max<std::size_t>(options.search_window, 1);
  const std::size_t length = window - 1 + on_air.size();
  Rng idle(derive_seed(options.seed, {label_hash("idle")}));
  rx.bits.resize(length);
  for (auto& b : rx.bits) b = {static_cast<std::uint8_t>(idle.bernoulli(q) ? 1 : 0), std::abs(2.0 * q - 1.0)};
  if (!rx.frame_aligned) return rx;

  const auto received = bsc_transmit(on_air, calibration_, options.condition, derive_seed(options.seed, {label_hash("flips")}));
  for (std::size_t i = 0; i < received.size() && rx.true_offset + i < length; ++i) {
    rx.bits[rx.true_offset + i] = {received[i], std::abs(1.0 - 2.0 * p)};
  }
  return rx;
}

SpreadSpectrumChannel::SpreadSpectrumChannel(SignalChannelConfig config)
    : config_(std::move(config)), codec_(config_.pn_seed, config_.gain) {}

audio::PcmSignal SpreadSpectrumChannel::carrier_for(std::size_t samples, std::uint64_t seed) const {
  if (config_.carriers.empty()) {
    return audio::synth_speech_like(static_cast<double>(samples) / audio::kSampleRate, seed);
  }
  Rng rng(seed);
  const auto& src = config_.carriers[rng.below(config_.carriers.size())];
  audio::PcmSignal out(samples);
  if (src.empty()) return out;
  std::size_t pos = rng.below(src.size());
  for (auto& v : out.samples) {
    v = src.samples[pos];
    pos = (pos + 1) % src.size();
  }
  return out;
}

Reception SpreadSpectrumChannel::transmit(const Bitstream& on_air, const TransmitOptions& options) const {
  const std::size_t window = std::max<std::size_t>(options.search_window, 1);
  const std::size_t frames = window - 1 + on_air.size();
  const auto carrier = carrier_for((on_air.size() + window + 1) * kFrameSamples, derive_seed(options.seed, {label_hash("carrier")}));
  const auto marked = codec_.embed_stream(on_air, carrier, options.condition.alpha);
  auto delayed = audio::apply_delay(marked, options.delay, derive_seed(options.seed, {label_hash("delay")}));
  audio::DistortionSpec spec{options.condition.kind, options.condition.coverage, config_.distortion,
                             derive_seed(options.seed, {label_hash("distortion")})};
  const auto received = audio::apply_distortion(delayed.signal, spec);

  const std::size_t phase =
      options.timing_recovery ? codec_.coarse_align(received, std::min(frames, config_.align_frames)) : 0;
  Reception rx;
  rx.delay_samples = delayed.delay_samples;
  rx.true_offset = delayed.delay_samples / kFrameSamples;
  rx.frame_aligned = phase == delayed.delay_samples % kFrameSamples;
  rx.bits = codec_.decode_stream(received, 0, frames, phase);
  return rx;
}

std::unique_ptr<FrameChannel> make_channel(Backend backend, const ChannelCalibration& calibration, SignalChannelConfig signal_config) {
  if (backend == Backend::statistical) return std::make_unique<StatisticalChannel>(calibration);
  return std::make_unique<SpreadSpectrumChannel>(std::move(signal_config));
}

}  // namespace callshield::watermark
