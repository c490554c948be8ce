#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "callshield/auth/protocol.hpp"
#include "callshield/harness/experiment.hpp"
#include "callshield/harness/stats.hpp"

namespace callshield::harness {

/// Channel and codes built once per experiment and shared read-only by trials.
class ExperimentContext {
 public:
  explicit ExperimentContext(ExperimentSpec spec);

  const ExperimentSpec& spec() const noexcept { return spec_; }
  const watermark::FrameChannel& channel() const noexcept { return *channel_; }
  const auth::ProtocolEnvironment& protocol(datalink::AlphaStrategy strategy) const;
  const gf_bch::BchCode& ablation_code() const noexcept { return ablation_code_; }

 private:
  ExperimentSpec spec_;
  std::unique_ptr<watermark::FrameChannel> channel_;
  std::unique_ptr<auth::ProtocolEnvironment> constant_env_;
  std::unique_ptr<auth::ProtocolEnvironment> adaptive_env_;
  gf_bch::BchCode ablation_code_;
};

/// Runs every trial of the configured experiment, in parallel, in a fixed order.
std::vector<TrialRecord> run_experiment(const ExperimentContext& ctx);
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec);

/// Re-runs one trial from its recorded inputs; equal to the original record.
TrialRecord replay_trial(const ExperimentContext& ctx, const TrialRecord& record);

// Experiment-specific variants.
inline const std::vector<std::string> kAblationConfigs = {"no_sync", "sync_only", "full"};
/// Seven distortion kinds at 20% coverage, cycled over trials.
const std::vector<audio::DistortionKind>& mix_kinds();
inline constexpr double kMixCoverage = 0.2;

// Summaries computed from records alone, so saved runs can be re-aggregated.

struct BitAccuracyRow {
  std::string group;
  watermark::ChannelCondition condition;
  RateEstimate bits;
  RateEstimate blocks16;
};
std::vector<BitAccuracyRow> summarize_bit_accuracy(const std::vector<TrialRecord>& records);

struct RateRow {
  std::string variant;
  std::string group;
  RateEstimate rate;
};
/// Success rate per (variant, group) in first-seen order: sync_eval, ablation, attacks.
std::vector<RateRow> summarize_rates(const std::vector<TrialRecord>& records);

struct StageRow {
  std::string group;
  watermark::ChannelCondition condition;
  std::array<RateEstimate, 4> stages;  // conditional on the stage being reached
  RateEstimate overall;
};
std::vector<StageRow> summarize_stages(const std::vector<TrialRecord>& records);

/// Share of failed sessions attributed to each stage.
struct FailureAttribution {
  std::int64_t failures = 0;
  std::map<std::string, std::int64_t> by_stage;
  double share(const std::string& stage) const;
};
FailureAttribution attribute_failures(const std::vector<TrialRecord>& records);

struct RetryRow {
  std::string variant;  // strategy
  std::string group;
  watermark::ChannelCondition condition;
  std::vector<RateEstimate> by_attempt;  // [n-1]: success within n attempts
};
std::vector<RetryRow> summarize_retries(const std::vector<TrialRecord>& records, int max_attempts);

struct TimingRow {
  int attempts = 0;
  std::int64_t count = 0;
  double mean = 0.0, min = 0.0, max = 0.0;
};
/// Successful sessions grouped by attempts used.
std::vector<TimingRow> summarize_timing(const std::vector<TrialRecord>& records);

struct AttackRow {
  std::string variant;
  std::int64_t trials = 0;
  std::int64_t acceptances = 0;
  std::int64_t delivered = 0;
  std::int64_t mac_rejections = 0;
};
std::vector<AttackRow> summarize_attacks(const std::vector<TrialRecord>& records);

/// Human-readable summary table for a finished run.
void print_summary(Experiment e, const std::vector<TrialRecord>& records, int max_attempts, std::ostream& out);

/// Writes gnuplot data blocks (and a matching .gp script) laid out like the
/// published figures: stage success per condition, success by attempt, sync
/// accuracy per pattern. Returns the files written.
std::vector<std::filesystem::path> write_plot_data(const std::vector<TrialRecord>& records,
                                                   const std::filesystem::path& out_prefix);

}  // namespace callshield::harness
