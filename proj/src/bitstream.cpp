#include "callshield/bitstream.hpp"

#include <algorithm>
#include <stdexcept>

namespace callshield {

Bitstream::Bitstream(std::size_t n, std::uint8_t value) : bits_(n, static_cast<std::uint8_t>(value & 1U)) {}

Bitstream::Bitstream(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("bit values must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }
}

Bitstream Bitstream::from_string(std::string_view text) {
  Bitstream out;
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.push_back(c - '0');
    } else if (c != ' ' && c != '_' && c != '|' && c != '\n' && c != '\t') {
      throw std::invalid_argument(std::string("invalid bit character '") + c + "'");
    }
  }
  return out;
}

Bitstream Bitstream::from_hex(std::string_view hex, std::size_t n_bits) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  Bitstream out;
  for (char c : hex) {
    int v = 0;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      throw std::invalid_argument(std::string("invalid hex character '") + c + "'");
    }
    for (int s = 3; s >= 0; --s) out.push_back((v >> s) & 1);
  }
  if (n_bits != SIZE_MAX) {
    if (n_bits > out.size()) throw std::invalid_argument("hex string shorter than requested bit length");
    for (std::size_t i = n_bits; i < out.size(); ++i) {
      if (out[i] != 0) throw std::invalid_argument("nonzero pad bits beyond requested bit length");
    }
    out.resize(n_bits);
  }
  return out;
}

Bitstream Bitstream::from_bytes(std::span<const std::uint8_t> bytes) {
  Bitstream out;
  out.bits_.reserve(bytes.size() * 8);
  for (std::uint8_t byte : bytes) {
    for (int s = 7; s >= 0; --s) out.push_back((byte >> s) & 1);
  }
  return out;
}

Bitstream Bitstream::from_uint(std::uint64_t value, std::size_t n_bits) {
  if (n_bits > 64) throw std::invalid_argument("from_uint supports at most 64 bits");
  Bitstream out;
  for (std::size_t i = n_bits; i-- > 0;) out.push_back(static_cast<int>((value >> i) & 1U));
  return out;
}

std::string Bitstream::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

std::string Bitstream::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < bits_.size(); i += 4) {
    int v = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      v <<= 1;
      if (i + j < bits_.size()) v |= bits_[i + j];
    }
    s.push_back(kDigits[v]);
  }
  return s;
}

std::vector<std::uint8_t> Bitstream::to_bytes() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] != 0) out[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
  }
  return out;
}

std::uint64_t Bitstream::to_uint(std::size_t pos, std::size_t n_bits) const {
  if (n_bits > 64 || pos + n_bits > bits_.size()) throw std::out_of_range("to_uint range");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n_bits; ++i) v = (v << 1) | bits_[pos + i];
  return v;
}

void Bitstream::append(const Bitstream& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }

Bitstream Bitstream::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > bits_.size()) throw std::out_of_range("Bitstream::slice out of range");
  Bitstream out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                   bits_.begin() + static_cast<std::ptrdiff_t>(pos + len));
  return out;
}

std::size_t Bitstream::weight() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Bitstream operator^(const Bitstream& a, const Bitstream& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor of bitstreams with different lengths");
  Bitstream out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

Bitstream concat(const Bitstream& a, const Bitstream& b) {
  Bitstream out = a;
  out.append(b);
  return out;
}

std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming distance of different lengths");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1U : 0U;
  return d;
}

}  // namespace callshield
