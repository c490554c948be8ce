#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "callshield/auth/protocol.hpp"

namespace callshield::auth {

enum class AttackKind { replay, forgery, spoofed_id, injected_watermark };
std::string_view to_string(AttackKind k);
std::optional<AttackKind> parse_attack(std::string_view name);

struct AttackReport {
  AttackKind kind = AttackKind::forgery;
  int trials = 0;
  int acceptances = 0;          // receiver authenticated the attacker
  int datalink_deliveries = 0;  // attacker response frames that passed sync and BCH
  int mac_rejections = 0;
};

/// The attacker knows the protocol, the public watermark and past transcripts,
/// and controls the channel, but holds no victim key.
///  replay: answers with the response recorded from an earlier honest session.
///  forgery: answers with the MAC under a random key.
///  spoofed_id: a registered contact presents the victim's id with its own key.
///  injected_watermark: embeds attacker-chosen 128-bit frames with the public embedder.
AttackReport simulate_attack(AttackKind kind, int trials, const ProtocolEnvironment& env,
                             const watermark::ChannelCondition& condition, std::uint64_t seed);

/// Uniformly random MAC guesses against one fixed key and challenge.
long long mac_guess_acceptances(long long trials, std::uint64_t seed);

}  // namespace callshield::auth
