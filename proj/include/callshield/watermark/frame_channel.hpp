#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "callshield/audio/distortion.hpp"
#include "callshield/bitstream.hpp"
#include "callshield/watermark/calibration.hpp"
#include "callshield/watermark/spread_spectrum.hpp"

namespace callshield::watermark {

enum class Backend { statistical, spread_spectrum };
std::string_view to_string(Backend b);
std::optional<Backend> parse_backend(std::string_view name);

struct TransmitOptions {
  ChannelCondition condition;
  std::size_t search_window = 8;  // extra frame positions decoded past the nominal start
  bool timing_recovery = true;    // receiver-side sub-frame alignment
  audio::DelaySpec delay;
  std::uint64_t seed = 0;
};

/// What the receiver decodes, starting at the nominal (zero-delay) frame
/// position: search_window - 1 + |on_air| decoded frames. The ground-truth
/// fields are for diagnostics and must not feed receiver logic.
struct Reception {
  DecodedBits bits;
  std::size_t delay_samples = 0;
  std::size_t true_offset = 0;  // frame index where on-air bit 0 landed
  bool frame_aligned = true;    // receiver frame grid coincides with the sender's
};

/// One transmission of an on-air bit sequence through a frame-bit channel.
class FrameChannel {
 public:
  virtual ~FrameChannel() = default;
  virtual Reception transmit(const Bitstream& on_air, const TransmitOptions& options) const = 0;
  virtual Backend backend() const noexcept = 0;
};

/// Calibrated binary symmetric channel. Frames carrying no watermark decode as
/// Bernoulli(idle_one_probability). Timing recovery is modelled as exact; with
/// it disabled, any sub-frame delay leaves every frame misaligned, so all
/// decoded bits are idle noise.
class StatisticalChannel final : public FrameChannel {
 public:
  explicit StatisticalChannel(ChannelCalibration calibration);
  Reception transmit(const Bitstream& on_air, const TransmitOptions& options) const override;
  Backend backend() const noexcept override { return Backend::statistical; }
  const ChannelCalibration& calibration() const noexcept { return calibration_; }

 private:
  ChannelCalibration calibration_;
};

struct SignalChannelConfig {
  std::uint64_t pn_seed = kDefaultPnSeed;
  double gain = 0.1;
  audio::DistortionParams distortion;
  std::vector<audio::PcmSignal> carriers;  // empty: synthesize speech-like audio per transmission
  std::size_t align_frames = 40;
};

/// Embeds into carrier audio, then delay, then distortion, then per-sample
/// coarse alignment and per-frame correlation decoding.
class SpreadSpectrumChannel final : public FrameChannel {
 public:
  explicit SpreadSpectrumChannel(SignalChannelConfig config = {});
  Reception transmit(const Bitstream& on_air, const TransmitOptions& options) const override;
  Backend backend() const noexcept override { return Backend::spread_spectrum; }
  const SpreadSpectrumCodec& codec() const noexcept { return codec_; }

  audio::PcmSignal carrier_for(std::size_t samples, std::uint64_t seed) const;

 private:
  SignalChannelConfig config_;
  SpreadSpectrumCodec codec_;
};

std::unique_ptr<FrameChannel> make_channel(Backend backend, const ChannelCalibration& calibration,
                                           SignalChannelConfig signal_config = {});

}  // namespace callshield::watermark
