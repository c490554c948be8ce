#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <set>
#include <utility>

#include "callshield/bitstream.hpp"

namespace callshield::auth {

using Key = std::array<std::uint8_t, 32>;
using Mac = std::array<std::uint8_t, 16>;

/// 64-bit nonce and 64-bit session id; 128 bits on the wire, N first, both big-endian.
struct Challenge {
  std::uint64_t nonce = 0;
  std::uint64_t session_id = 0;

  std::array<std::uint8_t, 16> bytes() const;
  Bitstream to_bits() const;
  /// Requires exactly 128 bits.
  static Challenge from_bits(const Bitstream& bits);
  friend bool operator==(const Challenge&, const Challenge&) = default;
};

struct MacResponse {
  Mac mac{};

  Bitstream to_bits() const;
  static MacResponse from_bits(const Bitstream& bits);
  friend bool operator==(const MacResponse&, const MacResponse&) = default;
};

/// First 16 bytes of HMAC-SHA256(K, N || S).
MacResponse compute_mac(const Key& key, const Challenge& challenge);
/// Constant-time comparison against compute_mac.
bool verify_mac(const Key& key, const Challenge& challenge, const MacResponse& received);

/// Source of 64-bit nonces and session ids.
class NonceSource {
 public:
  virtual ~NonceSource() = default;
  virtual std::uint64_t next() = 0;
};

/// Deterministic generator for experiments: HMAC-SHA256 keyed by the seed over a block counter.
class SeededNonceSource final : public NonceSource {
 public:
  explicit SeededNonceSource(std::uint64_t seed);
  std::uint64_t next() override;

 private:
  Key key_{};
  std::uint64_t counter_ = 0;
};

/// Operating-system entropy through OpenSSL's RAND_bytes.
class OsNonceSource final : public NonceSource {
 public:
  std::uint64_t next() override;
};

Key random_key(NonceSource& source);

/// (session id, nonce) pairs of completed sessions, kept for the process lifetime.
class ReplayCache {
 public:
  bool contains(const Challenge& c) const { return seen_.contains({c.session_id, c.nonce}); }
  void insert(const Challenge& c) { seen_.insert({c.session_id, c.nonce}); }
  std::size_t size() const noexcept { return seen_.size(); }

 private:
  std::set<std::pair<std::uint64_t, std::uint64_t>> seen_;
};

}  // namespace callshield::auth
