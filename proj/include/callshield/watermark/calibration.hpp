#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "callshield/audio/distortion.hpp"

namespace callshield::watermark {

struct ChannelCondition {
  audio::DistortionKind kind = audio::DistortionKind::clean;
  double coverage = 0.0;
  double alpha = 0.6;
};

std::string describe(const ChannelCondition& c);

/// Two-state Markov burst channel. Bits flip with p_good / p_bad depending on the state.
struct GilbertElliott {
  double p_good = 0.0;
  double p_bad = 0.0;
  double good_to_bad = 0.0;
  double bad_to_good = 1.0;

  double stationary_bad() const;
  double mean_crossover() const;
};

/// Knobs that derive a Gilbert-Elliott chain from a mean crossover probability p.
struct BurstModelConfig {
  bool enabled = false;
  double good_scale = 0.25;  // p_good = good_scale * p
  double bad_scale = 4.0;    // p_bad = min(bad_cap, bad_scale * p)
  double bad_cap = 0.4;
  double mean_bad_dwell_frames = 5.0;

  /// Chain whose stationary error rate equals p.
  GilbertElliott for_crossover(double p) const;
};

/// Bit accuracy per (distortion kind, coverage, alpha). Immutable once loaded.
class ChannelCalibration {
 public:
  static ChannelCalibration load(const std::filesystem::path& path);
  static ChannelCalibration from_json_text(const std::string& text);
  /// Path from $CALLSHIELD_CALIBRATION, else the file shipped in data/.
  static std::filesystem::path default_path();
  static const ChannelCalibration& shipped();

  /// Clean ignores coverage; coverage 0 on any kind means clean.
  /// Throws CalibrationMissError for unknown cells or alpha outside the table.
  double bit_accuracy(const ChannelCondition& c) const;
  double crossover(const ChannelCondition& c) const { return 1.0 - bit_accuracy(c); }
  bool contains(const ChannelCondition& c) const;

  double idle_one_probability() const noexcept { return idle_one_; }
  const BurstModelConfig& burst_model() const noexcept { return burst_; }
  ChannelCalibration with_burst_model(bool enabled) const;
  const std::vector<double>& alphas() const noexcept { return alphas_; }
  /// Non-clean (kind, coverage) cells in file order, clean first.
  std::vector<std::pair<audio::DistortionKind, double>> cells() const;

 private:
  std::vector<double> alphas_;
  std::map<std::pair<audio::DistortionKind, long>, std::vector<double>> table_;  // coverage in percent
  std::vector<std::pair<audio::DistortionKind, long>> order_;
  double idle_one_ = 0.5;
  BurstModelConfig burst_;
};

}  // namespace callshield::watermark
