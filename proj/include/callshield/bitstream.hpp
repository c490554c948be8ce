#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace callshield {

/// Ordered sequence of bits. Every element is 0 or 1.
///
/// Serialization helpers are MSB-first: bit 0 of the stream is the most
/// significant bit of the first byte / hex digit.
class Bitstream {
 public:
  Bitstream() = default;
  explicit Bitstream(std::size_t n, std::uint8_t value = 0);
  Bitstream(std::initializer_list<int> bits);

  /// Parses a string of '0'/'1' characters. Whitespace, '_' and '|' are ignored.
  static Bitstream from_string(std::string_view text);
  /// Parses hex, MSB-first. With `n_bits` the result is truncated to that
  /// length (the trailing pad bits of the last digit must then be zero).
  static Bitstream from_hex(std::string_view hex, std::size_t n_bits = SIZE_MAX);
  static Bitstream from_bytes(std::span<const std::uint8_t> bytes);
  static Bitstream from_uint(std::uint64_t value, std::size_t n_bits);

  std::string to_string() const;
  /// Hex, MSB-first; the last digit is zero-padded on the right.
  std::string to_hex() const;
  /// Bytes, MSB-first; the last byte is zero-padded on the right.
  std::vector<std::uint8_t> to_bytes() const;
  std::uint64_t to_uint(std::size_t pos, std::size_t n_bits) const;

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  std::uint8_t& operator[](std::size_t i) noexcept { return bits_[i]; }

  void push_back(int bit) { bits_.push_back(static_cast<std::uint8_t>(bit & 1)); }
  void append(const Bitstream& other);
  void resize(std::size_t n) { bits_.resize(n, 0); }
  Bitstream slice(std::size_t pos, std::size_t len) const;
  void flip(std::size_t i) noexcept { bits_[i] ^= 1U; }
  std::size_t weight() const noexcept;

  auto begin() const noexcept { return bits_.begin(); }
  auto end() const noexcept { return bits_.end(); }
  auto begin() noexcept { return bits_.begin(); }
  auto end() noexcept { return bits_.end(); }
  std::span<const std::uint8_t> view() const noexcept { return bits_; }

  friend bool operator==(const Bitstream&, const Bitstream&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

Bitstream operator^(const Bitstream& a, const Bitstream& b);
Bitstream concat(const Bitstream& a, const Bitstream& b);
std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace callshield
