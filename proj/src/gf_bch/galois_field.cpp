#include "callshield/gf_bch/galois_field.hpp"

#include <array>
#include <string>

#include "callshield/errors.hpp"

namespace callshield::gf_bch {

namespace {

constexpr std::array<std::uint32_t, 17> kPrimitivePolys = {
    0,        0,
    0x7,      // x^2+x+1
    0xb,      // x^3+x+1
    0x13,     // x^4+x+1
    0x25,     // x^5+x^2+1
    0x43,     // x^6+x+1
    0x83,     // x^7+x+1
    0x11d,    // x^8+x^4+x^3+x^2+1
    0x211,    // x^9+x^4+1
    0x409,    // x^10+x^3+1
    0x805,    // x^11+x^2+1
    0x1053,   // x^12+x^6+x^4+x+1
    0x201b,   // x^13+x^4+x^3+x+1
    0x402b,   // x^14+x^5+x^3+x+1
    0x8003,   // x^15+x+1
    0x1002d,  // x^16+x^5+x^3+x^2+1
};

}  // namespace

std::uint32_t conventional_primitive_poly(int m) {
  if (m < 2 || m > 16) throw CodeConstructionError("extension degree m must be in [2, 16], got " + std::to_string(m));
  return kPrimitivePolys[static_cast<std::size_t>(m)];
}

GaloisField::GaloisField(int m) : GaloisField(m, conventional_primitive_poly(m)) {}

GaloisField::GaloisField(int m, std::uint32_t primitive_poly)
    : m_(m), order_((1 << m) - 1), poly_(primitive_poly) {
  if (m < 2 || m > 16) throw CodeConstructionError("extension degree m must be in [2, 16], got " + std::to_string(m));
  if ((primitive_poly >> m) != 1U) throw CodeConstructionError("primitive polynomial must have degree m");

  exp_.assign(static_cast<std::size_t>(2 * order_), 0);
  log_.assign(static_cast<std::size_t>(order_ + 1), -1);
  Element x = 1;
  for (int i = 0; i < order_; ++i) {
    if (i > 0 && x == 1) throw CodeConstructionError("polynomial is not primitive");
    exp_[static_cast<std::size_t>(i)] = x;
    log_[x] = i;
    x <<= 1;
    if ((x >> m) & 1U) x ^= primitive_poly;
  }
  if (x != 1) throw CodeConstructionError("polynomial is not primitive");
  for (int i = order_; i < 2 * order_; ++i) exp_[static_cast<std::size_t>(i)] = exp_[static_cast<std::size_t>(i - order_)];
}

Element GaloisField::div(Element a, Element b) const {
  if (b == 0) throw std::domain_error("division by zero in GF(2^m)");
  if (a == 0) return 0;
  return exp_[static_cast<std::size_t>(log_[a] - log_[b] + order_)];
}

Element GaloisField::inv(Element a) const { return div(1, a); }

Element GaloisField::pow(Element a, long long e) const noexcept {
  if (a == 0) return e == 0 ? 1 : 0;
  return exp(static_cast<long long>(log_[a]) * e);
}

}  // namespace callshield::gf_bch
