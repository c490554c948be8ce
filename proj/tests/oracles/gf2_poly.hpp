#pragma once

// Reference arithmetic written independently of the library: bit-serial
// shift-and-add multiplication and schoolbook long division over GF(2).

#include <cstdint>
#include <vector>

namespace oracle {

// Carry-less product of a and b reduced modulo poly (degree m).
inline std::uint32_t gf_mul_schoolbook(std::uint32_t a, std::uint32_t b, std::uint32_t poly, int m) {
  std::uint64_t acc = 0;
  for (int i = 0; i < m; ++i) {
    if ((b >> i) & 1U) acc ^= static_cast<std::uint64_t>(a) << i;
  }
  for (int d = 2 * m - 2; d >= m; --d) {
    if ((acc >> d) & 1U) acc ^= static_cast<std::uint64_t>(poly) << (d - m);
  }
  return static_cast<std::uint32_t>(acc);
}

// True when x has multiplicative order exactly 2^m - 1 modulo poly.
inline bool is_primitive_brute_force(std::uint32_t poly, int m) {
  const std::uint32_t order = (1U << m) - 1;
  std::uint32_t x = 1;
  for (std::uint32_t i = 1; i <= order; ++i) {
    x = gf_mul_schoolbook(x, 2, poly, m);
    if (x == 1) return i == order;
  }
  return false;
}

// Polynomials as coefficient vectors, index = degree.
using Poly = std::vector<std::uint8_t>;

inline Poly poly_mod(Poly dividend, const Poly& divisor) {
  int dd = static_cast<int>(divisor.size()) - 1;
  while (dd > 0 && divisor[static_cast<std::size_t>(dd)] == 0) --dd;
  for (int i = static_cast<int>(dividend.size()) - 1; i >= dd; --i) {
    if (dividend[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j <= dd; ++j) dividend[static_cast<std::size_t>(i - dd + j)] ^= divisor[static_cast<std::size_t>(j)];
  }
  dividend.resize(static_cast<std::size_t>(dd));
  return dividend;
}

// Parity of a systematic cyclic code: bits of m(x) x^r mod g(x), highest degree first.
// `message` is in wire order (first bit = highest-degree coefficient).
inline std::vector<std::uint8_t> systematic_parity(const std::vector<std::uint8_t>& message, int n, const Poly& g) {
  const int r = static_cast<int>(g.size()) - 1;
  const int k = n - r;
  Poly shifted(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < k && i < static_cast<int>(message.size()); ++i) {
    shifted[static_cast<std::size_t>(n - 1 - i)] = message[static_cast<std::size_t>(i)];
  }
  const Poly rem = poly_mod(shifted, g);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) out[static_cast<std::size_t>(j)] = rem[static_cast<std::size_t>(r - 1 - j)];
  return out;
}

}  // namespace oracle
