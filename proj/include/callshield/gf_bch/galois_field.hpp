#pragma once

#include <cstdint>
#include <vector>

namespace callshield::gf_bch {

using Element = std::uint32_t;

/// Lexicographically smallest primitive polynomial of degree m (2 <= m <= 16),
/// bit-packed with bit i holding the coefficient of x^i.
std::uint32_t conventional_primitive_poly(int m);

/// GF(2^m) with log/antilog tables. Immutable after construction.
class GaloisField {
 public:
  explicit GaloisField(int m);
  GaloisField(int m, std::uint32_t primitive_poly);

  int m() const noexcept { return m_; }
  /// Multiplicative group order, 2^m - 1.
  int order() const noexcept { return order_; }
  std::uint32_t primitive_poly() const noexcept { return poly_; }

  /// alpha^i for any integer i (reduced mod the group order).
  Element exp(long long i) const noexcept {
    long long r = i % order_;
    if (r < 0) r += order_;
    return exp_[static_cast<std::size_t>(r)];
  }
  /// Discrete log of a nonzero element.
  int log(Element x) const noexcept { return log_[x]; }

  static Element add(Element a, Element b) noexcept { return a ^ b; }
  Element mul(Element a, Element b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[static_cast<std::size_t>(log_[a] + log_[b])];
  }
  Element div(Element a, Element b) const;
  Element inv(Element a) const;
  Element pow(Element a, long long e) const noexcept;

 private:
  int m_;
  int order_;
  std::uint32_t poly_;
  std::vector<Element> exp_;  // length 2*order so log sums need no reduction
  std::vector<int> log_;
};

}  // namespace callshield::gf_bch
