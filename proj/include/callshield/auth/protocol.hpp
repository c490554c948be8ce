#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "callshield/auth/crypto.hpp"
#include "callshield/auth/keystore.hpp"
#include "callshield/datalink/link.hpp"

namespace callshield::auth {

enum class Role { caller, receiver };
enum class Phase { idle, await_challenge, await_response, await_finish, done, failed };
enum class Stage { beacon, challenge, response, finish };
inline constexpr std::array<Stage, 4> kStages = {Stage::beacon, Stage::challenge, Stage::response, Stage::finish};

std::string_view to_string(Role r);
std::string_view to_string(Phase p);
std::string_view to_string(Stage s);

/// Per-transmission waits, simulated seconds.
struct Timeouts {
  double start = 10.0;
  double challenge = 30.0;
  double response = 30.0;
  double finish = 10.0;
};

struct TranscriptEntry {
  double time = 0.0;  // simulated seconds when the transmission ended
  Role sender = Role::caller;
  Stage stage = Stage::beacon;
  int attempt = 0;
  double alpha = 0.0;
  Bitstream payload;  // message bits handed to the data link
  bool accepted = false;
};

struct SessionState {
  Role role = Role::caller;
  Phase phase = Phase::idle;
  double alpha = 0.0;
  std::map<Stage, int> attempts;
  Timeouts timers;
  std::vector<TranscriptEntry> transcript;
};

struct ProtocolConfig {
  datalink::LinkConfig link;
  datalink::ArqPolicy arq;
  Timeouts timeouts;
  double alpha0 = 0.6;
  Bitstream start_beacon = Bitstream::from_string("10110010");
  Bitstream finish_beacon = Bitstream::from_string("01001101");
  int beacon_m = 5, beacon_t = 5;     // (31, 11, 5)
  int payload_m = 9, payload_t = 55;  // (511, 130, 55)
};

/// The two BCH codes and the channel shared by both endpoints.
class ProtocolEnvironment {
 public:
  ProtocolEnvironment(const watermark::FrameChannel& channel, ProtocolConfig config);

  const watermark::FrameChannel& channel() const noexcept { return channel_; }
  const ProtocolConfig& config() const noexcept { return config_; }
  const gf_bch::BchCode& beacon_code() const noexcept { return beacon_code_; }
  const gf_bch::BchCode& payload_code() const noexcept { return payload_code_; }
  const gf_bch::BchCode& code_for(Stage s) const noexcept {
    return (s == Stage::beacon || s == Stage::finish) ? beacon_code_ : payload_code_;
  }

 private:
  const watermark::FrameChannel& channel_;
  ProtocolConfig config_;
  gf_bch::BchCode beacon_code_;
  gf_bch::BchCode payload_code_;
};

/// What the caller side puts on the air. The honest caller answers with the
/// MAC under its key; attack experiments substitute other behaviours.
class CallerBehavior {
 public:
  virtual ~CallerBehavior() = default;
  /// Contact id presented to the receiver (caller ID).
  virtual std::string claimed_contact() const = 0;
  /// false: the caller never sends a start beacon.
  virtual bool sends_start() const { return true; }
  virtual MacResponse respond(const Challenge& challenge) = 0;
};

class HonestCaller final : public CallerBehavior {
 public:
  HonestCaller(std::string contact, const Key& key) : contact_(std::move(contact)), key_(key) {}
  std::string claimed_contact() const override { return contact_; }
  MacResponse respond(const Challenge& challenge) override { return compute_mac(key_, challenge); }

 private:
  std::string contact_;
  Key key_;
};

/// Receiver endpoint; its replay cache and nonce source outlive single calls.
class Receiver {
 public:
  Receiver(KeyStore keys, NonceSource& nonces) : keys_(std::move(keys)), nonces_(nonces) {}

  /// Fresh challenge never present in the replay cache.
  Challenge new_challenge();
  /// Accepts only a correct MAC for an unused challenge, under the claimed contact's key.
  bool verify(const std::string& contact, const Challenge& challenge, const MacResponse& response) const;
  void complete(const Challenge& challenge) { replay_.insert(challenge); }
  const ReplayCache& replay_cache() const noexcept { return replay_; }

 private:
  KeyStore keys_;
  NonceSource& nonces_;
  ReplayCache replay_;
};

enum class ReceiverVerdict { authenticated, unauthenticated, failed };
std::string_view to_string(ReceiverVerdict v);

struct StageStatus {
  bool reached = false;
  bool succeeded = false;
  int attempts = 0;
};

struct AuthOutcome {
  bool caller_authenticated = false;  // caller received the finish beacon
  ReceiverVerdict receiver = ReceiverVerdict::failed;
  std::optional<std::string> contact;
  std::optional<Stage> failed_stage;
  std::array<StageStatus, 4> stages{};
  int restarts = 0;        // MAC mismatches answered with a fresh challenge
  int attempts_used = 0;   // max attempts consumed by any stage
  int mac_rejections = 0;
  bool datalink_delivered_response = false;  // a response frame passed sync and BCH at least once
  double elapsed_seconds = 0.0;
  SessionState caller;
  SessionState receiver_state;

  bool success() const { return caller_authenticated && receiver == ReceiverVerdict::authenticated; }
  const StageStatus& stage(Stage s) const { return stages[static_cast<std::size_t>(s)]; }
};

/// Runs both endpoints lock-step over the channel: Start, Challenge, Response,
/// Finish. Every stage is retried per the ArqPolicy with one budget per stage
/// for the whole session; a MAC mismatch makes the receiver restart from the
/// Challenge with a fresh nonce, consuming challenge budget.
AuthOutcome run_authentication(const ProtocolEnvironment& env, CallerBehavior& caller, Receiver& receiver,
                               const watermark::ChannelCondition& condition, std::uint64_t seed);

}  // namespace callshield::auth
