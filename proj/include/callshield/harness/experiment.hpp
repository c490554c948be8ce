#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "callshield/audio/distortion.hpp"
#include "callshield/datalink/link.hpp"
#include "callshield/watermark/frame_channel.hpp"

namespace callshield::harness {

enum class Experiment { bit_accuracy, sync_eval, ablation, protocol_stages, retry_comparison, timing, attacks };
std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

using GridCell = std::pair<audio::DistortionKind, double>;  // kind, coverage fraction

struct ExperimentSpec {
  Experiment experiment = Experiment::protocol_stages;
  watermark::Backend backend = watermark::Backend::statistical;
  std::vector<GridCell> grid;
  std::vector<double> alphas;
  int trials = 200;
  std::uint64_t seed = 1;
  std::string output;  // records file; empty: none
  int threads = 0;     // 0: hardware concurrency

  // Experiment knobs.
  int bits_per_trial = 512;  // bit_accuracy
  int max_attempts = 3;
  datalink::AlphaStrategy strategy = datalink::AlphaStrategy::adaptive_alpha;
  double alpha0 = 0.6;
  double guard_seconds = 0.5;
  int ablation_m = 6, ablation_t = 5;  // (63, 36, 5)
  int message_bits = 32;
  bool burst_model = false;
  std::string carrier_dir;       // WAV carriers for the signal backend; empty: synthetic speech
  std::vector<std::string> variants;  // patterns, ablation configs, strategies or attack kinds; empty: all

  /// Throws std::invalid_argument or CalibrationMissError.
  void validate() const;
};

/// Defaults per experiment: grid, alphas, trial count (200 statistical, 50 signal) and knobs.
ExperimentSpec default_spec(Experiment e, watermark::Backend backend = watermark::Backend::statistical);
/// Overrides spec fields from a JSON object; unknown keys throw FormatError.
ExperimentSpec apply_overrides(ExperimentSpec spec, const std::string& json_text);
ExperimentSpec apply_overrides_file(ExperimentSpec spec, const std::filesystem::path& path);

/// One trial: its inputs (enough to replay it from `seed`) and outcome.
struct TrialRecord {
  std::string experiment;
  std::string backend;
  std::string variant;  // pattern, ablation config, strategy or attack kind
  std::string group;    // aggregation label: condition or "mix"
  std::string kind;
  double coverage = 0.0;
  double alpha = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;

  bool success = false;
  std::array<int, 4> stages{-1, -1, -1, -1};  // beacon..finish: -1 not reached, 0 failed, 1 succeeded
  std::string failed_stage;
  int attempts = 0;
  int restarts = 0;
  int corrected_errors = 0;
  long long sync_offset = -1;  // -1: no sync found
  long long true_offset = -1;
  double elapsed_seconds = 0.0;
  std::int64_t hits = 0;  // correct bits (bit_accuracy)
  std::int64_t total = 0;
  std::int64_t blocks_ok = 0;  // fully correct 16-bit blocks
  std::int64_t blocks = 0;
  bool delivered = false;  // datalink accepted the frame (attacks)
  int mac_rejections = 0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// CSV column order, stable across releases.
const std::vector<std::string>& record_columns();

enum class RecordFormat { csv, jsonl };
std::optional<RecordFormat> parse_format(std::string_view name);
/// Format from the file extension (.csv or .jsonl), jsonl otherwise.
RecordFormat format_for(const std::filesystem::path& path);

void write_records(const std::vector<TrialRecord>& records, RecordFormat format, std::ostream& out);
void write_records(const std::vector<TrialRecord>& records, const std::filesystem::path& path);
std::vector<TrialRecord> read_records(const std::filesystem::path& path);
std::vector<TrialRecord> read_jsonl(std::istream& in);
std::vector<TrialRecord> read_csv(std::istream& in);

}  // namespace callshield::harness
