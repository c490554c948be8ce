#include "callshield/auth/protocol.hpp"

#include <algorithm>

#include "callshield/rng.hpp"

namespace callshield::auth {

std::string_view to_string(Role r) { return r == Role::caller ? "caller" : "receiver"; }

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::idle: return "idle";
    case Phase::await_challenge: return "await_challenge";
    case Phase::await_response: return "await_response";
    case Phase::await_finish: return "await_finish";
    case Phase::done: return "done";
    case Phase::failed: return "failed";
  }
  return "unknown";
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::beacon: return "beacon";
    case Stage::challenge: return "challenge";
    case Stage::response: return "response";
    case Stage::finish: return "finish";
  }
  return "unknown";
}

std::string_view to_string(ReceiverVerdict v) {
  switch (v) {
    case ReceiverVerdict::authenticated: return "authenticated";
    case ReceiverVerdict::unauthenticated: return "unauthenticated";
    case ReceiverVerdict::failed: return "failed";
  }
  return "unknown";
}

ProtocolEnvironment::ProtocolEnvironment(const watermark::FrameChannel& channel, ProtocolConfig config)
    : channel_(channel),
      config_(std::move(config)),
      beacon_code_(config_.beacon_m, config_.beacon_t),
      payload_code_(config_.payload_m, config_.payload_t) {
  config_.arq.validate();
}

Challenge Receiver::new_challenge() {
  Challenge c;
  do {
    c.nonce = nonces_.next();
    c.session_id = nonces_.next();
  } while (replay_.contains(c));
  return c;
}

bool Receiver::verify(const std::string& contact, const Challenge& challenge, const MacResponse& response) const {
  const auto key = keys_.find(contact);
  if (!key || replay_.contains(challenge)) return false;
  return verify_mac(*key, challenge, response);
}

namespace {

class SessionDriver {
 public:
  SessionDriver(const ProtocolEnvironment& env, const watermark::ChannelCondition& condition, std::uint64_t seed, AuthOutcome& out)
      : cfg_(env.config()),
        condition_(condition),
        seed_(seed),
        out_(out),
        beacon_link_(env.channel(), env.beacon_code(), cfg_.link, cfg_.arq),
        payload_link_(env.channel(), env.payload_code(), cfg_.link, cfg_.arq) {}

  bool budget_left(Stage s) const { return used(s) < cfg_.arq.max_attempts; }
  int used(Stage s) const { return out_.stages[static_cast<std::size_t>(s)].attempts; }

  std::optional<Bitstream> transmit(Stage s, Role sender, const Bitstream& message, const datalink::Validator& validator) {
    auto& status = out_.stages[static_cast<std::size_t>(s)];
    status.reached = true;
    const int attempt = ++status.attempts;
    auto cond = condition_;
    cond.alpha = cfg_.arq.alpha_for_attempt(cfg_.alpha0, attempt);

    const auto& link = (s == Stage::beacon || s == Stage::finish) ? beacon_link_ : payload_link_;
    std::optional<Bitstream> accepted;
    const auto log = link.transmit_once(message, cond, derive_seed(seed_, {static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(attempt)}),
                                        validator, &accepted);
    double seconds = log.audio_seconds;
    if (attempt == 1 || cfg_.link.guard_on_retransmission) seconds += cfg_.link.guard_seconds;
    out_.elapsed_seconds += seconds;
    if (seconds > timeout_for(s)) accepted.reset();  // the peer gave up waiting

    auto& sender_state = sender == Role::caller ? out_.caller : out_.receiver_state;
    auto& peer_state = sender == Role::caller ? out_.receiver_state : out_.caller;
    sender_state.alpha = cond.alpha;
    sender_state.attempts[s] = attempt;
    sender_state.transcript.push_back({out_.elapsed_seconds, sender, s, attempt, cond.alpha, message, accepted.has_value()});
    if (accepted) peer_state.transcript.push_back({out_.elapsed_seconds, sender, s, attempt, cond.alpha, *accepted, true});
    return accepted;
  }

  std::optional<Bitstream> deliver(Stage s, Role sender, const Bitstream& message, const datalink::Validator& validator = {}) {
    std::optional<Bitstream> got;
    while (!got && budget_left(s)) got = transmit(s, sender, message, validator);
    return got;
  }

  void fail(Stage s) {
    out_.failed_stage = s;
    out_.caller.phase = Phase::failed;
    if (out_.receiver != ReceiverVerdict::authenticated) out_.receiver_state.phase = Phase::failed;
  }

 private:
  double timeout_for(Stage s) const {
    switch (s) {
      case Stage::beacon: return cfg_.timeouts.start;
      case Stage::challenge: return cfg_.timeouts.challenge;
      case Stage::response: return cfg_.timeouts.response;
      case Stage::finish: return cfg_.timeouts.finish;
    }
    return 0.0;
  }

  const ProtocolConfig& cfg_;
  watermark::ChannelCondition condition_;
  std::uint64_t seed_;
  AuthOutcome& out_;
  datalink::DataLink beacon_link_;
  datalink::DataLink payload_link_;
};

}  // namespace

AuthOutcome run_authentication(const ProtocolEnvironment& env, CallerBehavior& caller, Receiver& receiver,
                               const watermark::ChannelCondition& condition, std::uint64_t seed) {
  const auto& cfg = env.config();
  AuthOutcome out;
  out.caller.role = Role::caller;
  out.caller.timers = cfg.timeouts;
  out.caller.alpha = cfg.alpha0;
  out.receiver_state.role = Role::receiver;
  out.receiver_state.timers = cfg.timeouts;
  out.receiver_state.alpha = cfg.alpha0;
  SessionDriver drv(env, condition, seed, out);

  // Start
  if (!caller.sends_start()) {
    out.receiver = ReceiverVerdict::unauthenticated;
    out.elapsed_seconds = cfg.timeouts.start;
    out.failed_stage = Stage::beacon;
    out.stages[0].reached = true;
    out.caller.phase = Phase::failed;
    return out;
  }
  out.caller.phase = Phase::await_challenge;
  const auto& start = cfg.start_beacon;
  if (!drv.deliver(Stage::beacon, Role::caller, start, [&](const Bitstream& b) { return b == start; })) {
    drv.fail(Stage::beacon);
    out.receiver = ReceiverVerdict::unauthenticated;
    out.attempts_used = drv.used(Stage::beacon);
    return out;
  }
  out.stages[0].succeeded = true;

  // Challenge and Response, restarted with a fresh nonce on MAC mismatch
  const auto contact = caller.claimed_contact();
  while (true) {
    const auto challenge = receiver.new_challenge();
    out.receiver_state.phase = Phase::await_response;
    const auto got_challenge = drv.deliver(Stage::challenge, Role::receiver, challenge.to_bits());
    if (!got_challenge) {
      drv.fail(Stage::challenge);
      break;
    }
    out.stages[1].succeeded = true;
    out.caller.phase = Phase::await_finish;

    const auto response = caller.respond(Challenge::from_bits(*got_challenge));
    const auto got_response = drv.deliver(Stage::response, Role::caller, response.to_bits());
    if (!got_response) {
      drv.fail(Stage::response);
      break;
    }
    out.datalink_delivered_response = true;
    if (receiver.verify(contact, challenge, MacResponse::from_bits(*got_response))) {
      receiver.complete(challenge);
      out.stages[2].succeeded = true;
      out.receiver = ReceiverVerdict::authenticated;
      out.contact = contact;
      out.receiver_state.phase = Phase::done;
      break;
    }
    ++out.mac_rejections;
    if (!drv.budget_left(Stage::challenge)) {
      drv.fail(Stage::response);
      break;
    }
    ++out.restarts;
    out.caller.phase = Phase::await_challenge;
  }

  if (out.receiver == ReceiverVerdict::authenticated) {
    const auto& finish = cfg.finish_beacon;
    if (drv.deliver(Stage::finish, Role::receiver, finish, [&](const Bitstream& b) { return b == finish; })) {
      out.stages[3].succeeded = true;
      out.caller_authenticated = true;
      out.caller.phase = Phase::done;
    } else {
      drv.fail(Stage::finish);
    }
  }
  for (auto s : kStages) out.attempts_used = std::max(out.attempts_used, drv.used(s));
  return out;
}

}  // namespace callshield::auth
