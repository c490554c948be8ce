#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "callshield/audio/distortion.hpp"
#include "callshield/bitstream.hpp"
#include "callshield/datalink/sync.hpp"
#include "callshield/gf_bch/bch_code.hpp"
#include "callshield/watermark/frame_channel.hpp"

namespace callshield::datalink {

inline constexpr double kSecondsPerBit = 0.040;

/// [sync preamble][message bits][ECC bits]; the phase tag is local bookkeeping.
struct DataLinkFrame {
  Bitstream sync;
  Bitstream payload;
  std::string phase;

  Bitstream on_air() const { return concat(sync, payload); }
  std::size_t size() const noexcept { return sync.size() + payload.size(); }
};

/// Throws PayloadTooLargeError when |message| > code.k().
DataLinkFrame build_frame(const gf_bch::BchCode& code, const SyncPattern& sync, const Bitstream& message, std::string phase = {});

enum class AlphaStrategy { constant_alpha, adaptive_alpha };
std::string_view to_string(AlphaStrategy s);
std::optional<AlphaStrategy> parse_strategy(std::string_view name);

struct ArqPolicy {
  int max_attempts = 3;
  AlphaStrategy strategy = AlphaStrategy::adaptive_alpha;
  double alpha_step = 0.1;
  double alpha_cap = 1.0;

  /// Strength for the 1-based attempt number.
  double alpha_for_attempt(double alpha0, int attempt) const;
  void validate() const;
};

struct LinkConfig {
  SyncPattern sync = SyncPattern::standard();
  std::size_t sync_threshold = 4;
  std::size_t search_window = 8;  // 3 delay frames + 5 guard frames
  double guard_seconds = 0.5;     // silence before the first transmission of a segment
  bool guard_on_retransmission = false;
  bool use_sync = true;
  bool use_ecc = true;
  bool candidate_fallback = true;  // try weaker sync matches when the best one fails to decode
  bool timing_recovery = true;
  audio::DelaySpec delay;
};

/// Extra receiver-side acceptance test on a decoded message (e.g. beacon equality).
using Validator = std::function<bool(const Bitstream&)>;

struct ReceiveOutcome {
  std::optional<Bitstream> message;
  bool sync_found = false;
  std::optional<std::size_t> offset;  // offset of the accepted (or best) candidate
  std::size_t candidates_tried = 0;
  int corrected_errors = 0;
  bool decode_failed = false;
};

/// Receiver: sync search, BCH decoding, zero-padding check, validator.
/// Candidates are tried in (distance, offset) order until one is accepted.
ReceiveOutcome receive_message(const Bitstream& received, const gf_bch::BchCode& code, const LinkConfig& config,
                               std::size_t payload_bits, const Validator& validator = {});

struct AttemptLog {
  int attempt = 0;
  double alpha = 0.0;
  bool sync_found = false;
  std::optional<std::size_t> offset;
  std::size_t true_offset = 0;
  std::size_t delay_samples = 0;
  bool accepted = false;
  bool correct = false;  // accepted message equals the one sent (ground truth)
  int corrected_errors = 0;
  double audio_seconds = 0.0;
};

struct Delivery {
  bool delivered = false;  // receiver accepted something
  std::optional<Bitstream> message;
  int attempts = 0;
  double audio_seconds = 0.0;
  std::vector<AttemptLog> log;

  bool correct(const Bitstream& sent) const { return message && *message == sent; }
};

/// Seconds of audio for one transmission of `on_air_bits` bits, optionally preceded by a guard.
double transmission_seconds(std::size_t on_air_bits, double guard_seconds);

/// Sender/receiver pair over a frame channel, with stop-and-wait retries.
/// ACK/NACK travels out of band: the sender learns the outcome immediately.
class DataLink {
 public:
  DataLink(const watermark::FrameChannel& channel, const gf_bch::BchCode& code, LinkConfig config, ArqPolicy policy);

  Bitstream on_air(const Bitstream& message) const;
  /// One transmission at the condition's alpha.
  AttemptLog transmit_once(const Bitstream& message, const watermark::ChannelCondition& condition, std::uint64_t seed,
                           const Validator& validator, std::optional<Bitstream>* accepted = nullptr) const;
  /// Up to max_attempts transmissions; attempt a uses policy.alpha_for_attempt(condition.alpha, a).
  Delivery send_message(const Bitstream& message, const watermark::ChannelCondition& condition, std::uint64_t seed,
                        const Validator& validator = {}) const;

  const gf_bch::BchCode& code() const noexcept { return code_; }
  const LinkConfig& config() const noexcept { return config_; }
  const ArqPolicy& policy() const noexcept { return policy_; }

 private:
  const watermark::FrameChannel& channel_;
  const gf_bch::BchCode& code_;
  LinkConfig config_;
  ArqPolicy policy_;
};

}  // namespace callshield::datalink
