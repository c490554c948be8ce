#include "callshield/auth/attacks.hpp"

#include "callshield/rng.hpp"

namespace callshield::auth {

namespace {

const char* const kVictim = "alice";
const char* const kAttacker = "mallory";

class RecordedResponseCaller final : public CallerBehavior {
 public:
  explicit RecordedResponseCaller(MacResponse recorded) : recorded_(recorded) {}
  std::string claimed_contact() const override { return kVictim; }
  MacResponse respond(const Challenge&) override { return recorded_; }

 private:
  MacResponse recorded_;
};

class KeyedImpostor final : public CallerBehavior {
 public:
  KeyedImpostor(std::string claimed, const Key& key) : claimed_(std::move(claimed)), key_(key) {}
  std::string claimed_contact() const override { return claimed_; }
  MacResponse respond(const Challenge& c) override { return compute_mac(key_, c); }

 private:
  std::string claimed_;
  Key key_;
};

class ArbitraryFrameCaller final : public CallerBehavior {
 public:
  explicit ArbitraryFrameCaller(std::uint64_t seed) : rng_(seed) {}
  std::string claimed_contact() const override { return kVictim; }
  MacResponse respond(const Challenge&) override {
    MacResponse r;
    for (auto& b : r.mac) b = static_cast<std::uint8_t>(rng_.next() & 0xffU);
    return r;
  }

 private:
  Rng rng_;
};

}  // namespace

std::string_view to_string(AttackKind k) {
  switch (k) {
    case AttackKind::replay: return "replay";
    case AttackKind::forgery: return "forgery";
    case AttackKind::spoofed_id: return "spoofed_id";
    case AttackKind::injected_watermark: return "injected_watermark";
  }
  return "unknown";
}

std::optional<AttackKind> parse_attack(std::string_view name) {
  for (auto k : {AttackKind::replay, AttackKind::forgery, AttackKind::spoofed_id, AttackKind::injected_watermark}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

AttackReport simulate_attack(AttackKind kind, int trials, const ProtocolEnvironment& env,
                             const watermark::ChannelCondition& condition, std::uint64_t seed) {
  SeededNonceSource keygen(derive_seed(seed, {label_hash("keys")}));
  const Key victim_key = random_key(keygen);
  const Key attacker_key = random_key(keygen);
  KeyStore store;
  store.add(kVictim, victim_key);
  store.add(kAttacker, attacker_key);
  SeededNonceSource nonces(derive_seed(seed, {label_hash("nonces")}));
  Receiver receiver(store, nonces);

  AttackReport report;
  report.kind = kind;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const auto trial_seed = derive_seed(seed, {label_hash("trial"), static_cast<std::uint64_t>(t)});
    AuthOutcome outcome;
    switch (kind) {
      case AttackKind::replay: {
        // Session A: honest call, attacker records the response that went on air.
        HonestCaller honest(kVictim, victim_key);
        const auto a = run_authentication(env, honest, receiver, condition, derive_seed(trial_seed, {1}));
        MacResponse recorded;
        for (const auto& e : a.caller.transcript) {
          if (e.stage == Stage::response) recorded = MacResponse::from_bits(e.payload);
        }
        RecordedResponseCaller replayer(recorded);
        outcome = run_authentication(env, replayer, receiver, condition, derive_seed(trial_seed, {2}));
        break;
      }
      case AttackKind::forgery: {
        SeededNonceSource k(derive_seed(trial_seed, {label_hash("forged-key")}));
        KeyedImpostor forger(kVictim, random_key(k));
        outcome = run_authentication(env, forger, receiver, condition, trial_seed);
        break;
      }
      case AttackKind::spoofed_id: {
        KeyedImpostor spoofer(kVictim, attacker_key);
        outcome = run_authentication(env, spoofer, receiver, condition, trial_seed);
        break;
      }
      case AttackKind::injected_watermark: {
        ArbitraryFrameCaller injector(derive_seed(trial_seed, {label_hash("frames")}));
        outcome = run_authentication(env, injector, receiver, condition, trial_seed);
        break;
      }
    }
    report.acceptances += outcome.receiver == ReceiverVerdict::authenticated ? 1 : 0;
    report.datalink_deliveries += outcome.datalink_delivered_response ? 1 : 0;
    report.mac_rejections += outcome.mac_rejections;
  }
  return report;
}

long long mac_guess_acceptances(long long trials, std::uint64_t seed) {
  SeededNonceSource src(seed);
  const Key key = random_key(src);
  const Challenge challenge{src.next(), src.next()};
  Rng rng(derive_seed(seed, {label_hash("guess")}));
  long long accepted = 0;
  MacResponse guess;
  for (long long i = 0; i < trials; ++i) {
    for (std::size_t j = 0; j < guess.mac.size(); j += 8) {
      const auto v = rng.next();
      for (std::size_t b = 0; b < 8; ++b) guess.mac[j + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    accepted += verify_mac(key, challenge, guess) ? 1 : 0;
  }
  return accepted;
}

}  // namespace callshield::auth
