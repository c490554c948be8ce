#include "callshield/watermark/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "callshield/errors.hpp"

#ifndef CALLSHIELD_DEFAULT_CALIBRATION
#define CALLSHIELD_DEFAULT_CALIBRATION "data/calibration.json"
#endif

namespace callshield::watermark {

namespace {

long coverage_key(double coverage) { return std::lround(coverage * 100.0); }

}  // namespace

std::string describe(const ChannelCondition& c) {
  std::ostringstream os;
  os << audio::to_string(c.kind) << '@' << coverage_key(c.coverage) << "%/a=" << c.alpha;
  return os.str();
}

double GilbertElliott::stationary_bad() const {
  const double s = good_to_bad + bad_to_good;
  return s > 0.0 ? good_to_bad / s : 0.0;
}

double GilbertElliott::mean_crossover() const {
  const double b = stationary_bad();
  return b * p_bad + (1.0 - b) * p_good;
}

GilbertElliott BurstModelConfig::for_crossover(double p) const {
  GilbertElliott ge;
  ge.p_good = good_scale * p;
  ge.p_bad = std::min(bad_cap, bad_scale * p);
  ge.bad_to_good = 1.0 / mean_bad_dwell_frames;
  if (ge.p_bad <= ge.p_good || p <= ge.p_good) {
    // Degenerate chain: stay in the good state with the plain crossover.
    ge.p_good = p;
    ge.good_to_bad = 0.0;
    return ge;
  }
  const double pi_bad = std::min(1.0, (p - ge.p_good) / (ge.p_bad - ge.p_good));
  ge.good_to_bad = pi_bad >= 1.0 ? 1.0 : ge.bad_to_good * pi_bad / (1.0 - pi_bad);
  return ge;
}

ChannelCalibration ChannelCalibration::from_json_text(const std::string& text) {
  ChannelCalibration cal;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("calibration JSON: ") + e.what());
  }
  try {
    cal.alphas_ = doc.at("alphas").get<std::vector<double>>();
    if (cal.alphas_.empty()) throw FormatError("calibration: empty alpha list");
    for (std::size_t i = 1; i < cal.alphas_.size(); ++i) {
      if (!(cal.alphas_[i] > cal.alphas_[i - 1])) throw FormatError("calibration: alphas must increase");
    }
    cal.idle_one_ = doc.value("idle_one_probability", 0.5);
    if (doc.contains("burst_model")) {
      const auto& b = doc["burst_model"];
      cal.burst_.enabled = b.value("enabled", false);
      cal.burst_.good_scale = b.value("good_scale", 0.25);
      cal.burst_.bad_scale = b.value("bad_scale", 4.0);
      cal.burst_.bad_cap = b.value("bad_cap", 0.4);
      cal.burst_.mean_bad_dwell_frames = b.value("mean_bad_dwell_frames", 5.0);
    }
    for (const auto& cell : doc.at("cells")) {
      const auto name = cell.at("kind").get<std::string>();
      const auto kind = audio::parse_distortion_kind(name);
      if (!kind) throw FormatError("calibration: unknown distortion kind '" + name + "'");
      auto acc = cell.at("bit_accuracy").get<std::vector<double>>();
      if (acc.size() != cal.alphas_.size()) throw FormatError("calibration: cell '" + name + "' has wrong accuracy count");
      for (double a : acc) {
        if (!(a >= 0.5 && a <= 1.0)) throw FormatError("calibration: accuracy outside [0.5, 1] in '" + name + "'");
      }
      const auto key = std::make_pair(*kind, *kind == audio::DistortionKind::clean ? 0L : coverage_key(cell.at("coverage").get<double>()));
      if (!cal.table_.emplace(key, std::move(acc)).second) throw FormatError("calibration: duplicate cell '" + name + "'");
      cal.order_.push_back(key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("calibration schema: ") + e.what());
  }
  return cal;
}

ChannelCalibration ChannelCalibration::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open calibration file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::filesystem::path ChannelCalibration::default_path() {
  if (const char* env = std::getenv("CALLSHIELD_CALIBRATION"); env != nullptr && *env != '\0') return env;
  return CALLSHIELD_DEFAULT_CALIBRATION;
}

const ChannelCalibration& ChannelCalibration::shipped() {
  static const ChannelCalibration cal = load(default_path());
  return cal;
}

bool ChannelCalibration::contains(const ChannelCondition& c) const {
  try {
    bit_accuracy(c);
    return true;
  } catch (const CalibrationMissError&) {
    return false;
  }
}

double ChannelCalibration::bit_accuracy(const ChannelCondition& c) const {
  const bool clean = c.kind == audio::DistortionKind::clean || coverage_key(c.coverage) == 0;
  const auto key = std::make_pair(clean ? audio::DistortionKind::clean : c.kind, clean ? 0L : coverage_key(c.coverage));
  const auto it = table_.find(key);
  if (it == table_.end()) throw CalibrationMissError("no calibration cell for " + describe(c));
  constexpr double eps = 1e-9;
  if (c.alpha < alphas_.front() - eps || c.alpha > alphas_.back() + eps) {
    throw CalibrationMissError("alpha outside calibrated range for " + describe(c));
  }
  const auto& acc = it->second;
  if (alphas_.size() == 1) return acc[0];
  std::size_t i = 1;
  while (i + 1 < alphas_.size() && c.alpha > alphas_[i] + eps) ++i;
  const double w = std::clamp((c.alpha - alphas_[i - 1]) / (alphas_[i] - alphas_[i - 1]), 0.0, 1.0);
  return acc[i - 1] + w * (acc[i] - acc[i - 1]);
}

ChannelCalibration ChannelCalibration::with_burst_model(bool enabled) const {
  ChannelCalibration copy = *this;
  copy.burst_.enabled = enabled;
  return copy;
}

std::vector<std::pair<audio::DistortionKind, double>> ChannelCalibration::cells() const {
  std::vector<std::pair<audio::DistortionKind, double>> out;
  for (const auto& [kind, pct] : order_) out.emplace_back(kind, static_cast<double>(pct) / 100.0);
  return out;
}

}  // namespace callshield::watermark
