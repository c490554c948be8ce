#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "callshield/bitstream.hpp"
#include "callshield/gf_bch/galois_field.hpp"

namespace callshield::gf_bch {

struct DecodeResult {
  Bitstream message;  // k bits, including any zero padding
  int corrected_errors = 0;
};

/// Narrow-sense binary BCH code of length n = 2^m - 1 and designed distance 2t+1.
///
/// Codewords are systematic and message-first on the wire: wire bit i is the
/// coefficient of x^(n-1-i), so the k message bits are followed by the n-k
/// parity bits of m(x) x^(n-k) mod g(x).
///
/// Immutable after construction; encode/decode are const and thread-safe.
class BchCode {
 public:
  BchCode(int m, int t);
  BchCode(int m, int t, std::uint32_t primitive_poly);

  int m() const noexcept { return field_.m(); }
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  int t() const noexcept { return t_; }
  const GaloisField& field() const noexcept { return field_; }
  /// Generator polynomial coefficients, index i = coefficient of x^i; degree n-k.
  const std::vector<std::uint8_t>& generator() const noexcept { return generator_; }

  /// Encodes up to k message bits; shorter messages are zero-padded at the end.
  /// Throws PayloadTooLargeError when message.size() > k.
  Bitstream encode(const Bitstream& message) const;

  /// Bounded-distance decoding: syndromes, Berlekamp-Massey, Chien search.
  /// Returns nullopt when the error locator has no consistent root set.
  /// Beyond t errors a wrong codeword may be returned (silent miscorrection).
  std::optional<DecodeResult> decode(const Bitstream& received) const;

  /// S_1 .. S_2t of an n-bit word.
  std::vector<Element> syndromes(const Bitstream& word) const;
  bool is_codeword(const Bitstream& word) const;

 private:
  GaloisField field_;
  int n_;
  int t_;
  int k_;
  std::vector<std::uint8_t> generator_;
};

/// Convenience factory, same as BchCode(m, t).
inline BchCode build_code(int m, int t) { return BchCode(m, t); }

}  // namespace callshield::gf_bch
