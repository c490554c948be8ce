#include "callshield/datalink/link.hpp"

#include <algorithm>
#include <stdexcept>

#include "callshield/errors.hpp"
#include "callshield/rng.hpp"

namespace callshield::datalink {

DataLinkFrame build_frame(const gf_bch::BchCode& code, const SyncPattern& sync, const Bitstream& message, std::string phase) {
  return {sync.bits(), code.encode(message), std::move(phase)};
}

std::string_view to_string(AlphaStrategy s) { return s == AlphaStrategy::constant_alpha ? "constant" : "adaptive"; }

std::optional<AlphaStrategy> parse_strategy(std::string_view name) {
  if (name == "constant" || name == "constant_alpha") return AlphaStrategy::constant_alpha;
  if (name == "adaptive" || name == "adaptive_alpha") return AlphaStrategy::adaptive_alpha;
  return std::nullopt;
}

double ArqPolicy::alpha_for_attempt(double alpha0, int attempt) const {
  if (strategy == AlphaStrategy::constant_alpha) return std::min(alpha0, alpha_cap);
  return std::min(alpha_cap, alpha0 + alpha_step * static_cast<double>(std::max(attempt, 1) - 1));
}

void ArqPolicy::validate() const {
  if (max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if (alpha_step < 0.0) throw std::invalid_argument("alpha_step must be >= 0");
}

double transmission_seconds(std::size_t on_air_bits, double guard_seconds) {
  return guard_seconds + static_cast<double>(on_air_bits) * kSecondsPerBit;
}

ReceiveOutcome receive_message(const Bitstream& received, const gf_bch::BchCode& code, const LinkConfig& config,
                               std::size_t payload_bits, const Validator& validator) {
  ReceiveOutcome out;
  const std::size_t body = config.use_ecc ? static_cast<std::size_t>(code.n()) : payload_bits;
  const std::size_t sync_len = config.use_sync ? config.sync.size() : 0;

  std::vector<SyncMatch> candidates;
  if (config.use_sync) {
    candidates = rank_sync_candidates(received, config.sync, config.search_window, config.sync_threshold);
    if (!config.candidate_fallback && candidates.size() > 1) candidates.resize(1);
    out.sync_found = !candidates.empty();
    if (out.sync_found) out.offset = candidates.front().offset;
  } else {
    candidates.push_back({0, 0});
  }

  for (const auto& cand : candidates) {
    const std::size_t start = cand.offset + sync_len;
    if (start + body > received.size()) continue;
    ++out.candidates_tried;
    const auto word = received.slice(start, body);
    Bitstream message;
    int corrected = 0;
    if (config.use_ecc) {
      const auto decoded = code.decode(word);
      if (!decoded) {
        out.decode_failed = true;
        continue;
      }
      const auto& m = decoded->message;
      if (std::any_of(m.begin() + static_cast<std::ptrdiff_t>(payload_bits), m.end(), [](std::uint8_t b) { return b != 0; })) {
        out.decode_failed = true;
        continue;
      }
      message = m.slice(0, payload_bits);
      corrected = decoded->corrected_errors;
    } else {
      message = word;
    }
    if (validator && !validator(message)) continue;
    out.message = std::move(message);
    out.offset = cand.offset;
    out.corrected_errors = corrected;
    out.decode_failed = false;
    return out;
  }
  return out;
}

DataLink::DataLink(const watermark::FrameChannel& channel, const gf_bch::BchCode& code, LinkConfig config, ArqPolicy policy)
    : channel_(channel), code_(code), config_(std::move(config)), policy_(policy) {
  policy_.validate();
}

Bitstream DataLink::on_air(const Bitstream& message) const {
  if (message.size() > static_cast<std::size_t>(code_.k())) {
    throw PayloadTooLargeError("message of " + std::to_string(message.size()) + " bits exceeds k=" + std::to_string(code_.k()));
  }
  Bitstream bits = config_.use_sync ? config_.sync.bits() : Bitstream();
  bits.append(config_.use_ecc ? code_.encode(message) : message);
  return bits;
}

AttemptLog DataLink::transmit_once(const Bitstream& message, const watermark::ChannelCondition& condition, std::uint64_t seed,
                                   const Validator& validator, std::optional<Bitstream>* accepted) const {
  const auto bits = on_air(message);
  watermark::TransmitOptions opts;
  opts.condition = condition;
  opts.search_window = config_.use_sync ? config_.search_window : 1;
  opts.timing_recovery = config_.timing_recovery && config_.use_sync;
  opts.delay = config_.delay;
  opts.seed = seed;
  const auto rx = channel_.transmit(bits, opts);
  const auto outcome = receive_message(watermark::hard_bits(rx.bits), code_, config_, message.size(), validator);

  AttemptLog log;
  log.alpha = condition.alpha;
  log.sync_found = outcome.sync_found;
  log.offset = outcome.offset;
  log.true_offset = rx.true_offset;
  log.delay_samples = rx.delay_samples;
  log.accepted = outcome.message.has_value();
  log.correct = log.accepted && *outcome.message == message;
  log.corrected_errors = outcome.corrected_errors;
  log.audio_seconds = transmission_seconds(bits.size(), 0.0);
  if (accepted != nullptr) *accepted = outcome.message;
  return log;
}

Delivery DataLink::send_message(const Bitstream& message, const watermark::ChannelCondition& condition, std::uint64_t seed,
                                const Validator& validator) const {
  Delivery d;
  for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
    auto cond = condition;
    cond.alpha = policy_.alpha_for_attempt(condition.alpha, attempt);
    std::optional<Bitstream> accepted;
    auto log = transmit_once(message, cond, derive_seed(seed, {static_cast<std::uint64_t>(attempt)}), validator, &accepted);
    log.attempt = attempt;
    if (attempt == 1 || config_.guard_on_retransmission) log.audio_seconds += config_.guard_seconds;
    d.audio_seconds += log.audio_seconds;
    d.attempts = attempt;
    d.log.push_back(log);
    if (accepted) {
      d.delivered = true;
      d.message = std::move(accepted);
      break;
    }
  }
  return d;
}

}  // namespace callshield::datalink
