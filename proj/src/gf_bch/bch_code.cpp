#include "callshield/gf_bch/bch_code.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "callshield/errors.hpp"

namespace callshield::gf_bch {

namespace {

// Product of (x - alpha^j) over a cyclotomic coset; the result must lie in GF(2)[x].
std::vector<std::uint8_t> minimal_polynomial(const GaloisField& gf, const std::vector<int>& coset) {
  std::vector<Element> poly{1};
  for (int j : coset) {
    const Element root = gf.exp(j);
    std::vector<Element> next(poly.size() + 1, 0);
    for (std::size_t d = 0; d < poly.size(); ++d) {
      next[d + 1] ^= poly[d];
      next[d] ^= gf.mul(poly[d], root);
    }
    poly = std::move(next);
  }
  std::vector<std::uint8_t> out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (poly[i] > 1) throw CodeConstructionError("minimal polynomial has non-binary coefficient");
    out[i] = static_cast<std::uint8_t>(poly[i]);
  }
  return out;
}

std::vector<std::uint8_t> multiply_gf2(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  std::vector<std::uint8_t> out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= b[j];
  }
  return out;
}

}  // namespace

BchCode::BchCode(int m, int t) : BchCode(m, t, conventional_primitive_poly(m)) {}

BchCode::BchCode(int m, int t, std::uint32_t primitive_poly) : field_(m, primitive_poly), n_(field_.order()), t_(t) {
  if (t < 1 || t >= (1 << (m - 1))) {
    throw CodeConstructionError("t must satisfy 1 <= t < 2^(m-1); got m=" + std::to_string(m) + " t=" + std::to_string(t));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  generator_ = {1};
  for (int i = 1; i <= 2 * t; ++i) {
    const int start = i % n_;
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> coset;
    int j = start;
    do {
      coset.push_back(j);
      seen[static_cast<std::size_t>(j)] = true;
      j = (2 * j) % n_;
    } while (j != start);
    generator_ = multiply_gf2(generator_, minimal_polynomial(field_, coset));
  }
  k_ = n_ - static_cast<int>(generator_.size() - 1);
  if (k_ <= 0) {
    throw CodeConstructionError("no message bits left for m=" + std::to_string(m) + " t=" + std::to_string(t));
  }
}

Bitstream BchCode::encode(const Bitstream& message) const {
  if (message.size() > static_cast<std::size_t>(k_)) {
    throw PayloadTooLargeError("message of " + std::to_string(message.size()) + " bits exceeds k=" + std::to_string(k_));
  }
  const int r = n_ - k_;
  std::vector<std::uint8_t> reg(static_cast<std::size_t>(r), 0);
  Bitstream out(static_cast<std::size_t>(n_));
  for (int i = 0; i < k_; ++i) {
    const std::uint8_t bit = static_cast<std::size_t>(i) < message.size() ? message[static_cast<std::size_t>(i)] : 0;
    out[static_cast<std::size_t>(i)] = bit;
    const std::uint8_t feedback = bit ^ reg[static_cast<std::size_t>(r - 1)];
    for (int d = r - 1; d > 0; --d) {
      reg[static_cast<std::size_t>(d)] = reg[static_cast<std::size_t>(d - 1)] ^ (feedback & generator_[static_cast<std::size_t>(d)]);
    }
    reg[0] = feedback & generator_[0];
  }
  for (int j = 0; j < r; ++j) out[static_cast<std::size_t>(k_ + j)] = reg[static_cast<std::size_t>(r - 1 - j)];
  return out;
}

std::vector<Element> BchCode::syndromes(const Bitstream& word) const {
  if (word.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("received word must have n=" + std::to_string(n_) + " bits");
  }
  std::vector<Element> s(static_cast<std::size_t>(2 * t_), 0);
  for (int i = 0; i < n_; ++i) {
    if (word[static_cast<std::size_t>(i)] == 0) continue;
    const long long degree = n_ - 1 - i;
    for (int j = 1; j <= 2 * t_; ++j) s[static_cast<std::size_t>(j - 1)] ^= field_.exp(degree * j);
  }
  return s;
}

bool BchCode::is_codeword(const Bitstream& word) const {
  const auto s = syndromes(word);
  return std::all_of(s.begin(), s.end(), [](Element e) { return e == 0; });
}

std::optional<DecodeResult> BchCode::decode(const Bitstream& received) const {
  const auto s = syndromes(received);
  if (std::all_of(s.begin(), s.end(), [](Element e) { return e == 0; })) {
    return DecodeResult{received.slice(0, static_cast<std::size_t>(k_)), 0};
  }

  // Berlekamp-Massey over GF(2^m).
  std::vector<Element> locator{1};
  std::vector<Element> prev{1};
  int length = 0;
  int shift = 1;
  Element prev_discrepancy = 1;
  for (int step = 0; step < 2 * t_; ++step) {
    Element discrepancy = s[static_cast<std::size_t>(step)];
    for (int i = 1; i <= length && i < static_cast<int>(locator.size()); ++i) {
      discrepancy ^= field_.mul(locator[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(step - i)]);
    }
    if (discrepancy == 0) {
      ++shift;
      continue;
    }
    const Element scale = field_.div(discrepancy, prev_discrepancy);
    std::vector<Element> updated = locator;
    if (updated.size() < prev.size() + static_cast<std::size_t>(shift)) updated.resize(prev.size() + static_cast<std::size_t>(shift), 0);
    for (std::size_t i = 0; i < prev.size(); ++i) updated[i + static_cast<std::size_t>(shift)] ^= field_.mul(scale, prev[i]);
    if (2 * length <= step) {
      prev = std::move(locator);
      length = step + 1 - length;
      prev_discrepancy = discrepancy;
      shift = 1;
    } else {
      ++shift;
    }
    locator = std::move(updated);
  }
  while (locator.size() > 1 && locator.back() == 0) locator.pop_back();
  if (length > t_ || static_cast<int>(locator.size()) - 1 != length) return std::nullopt;

  // Chien search: an error at degree d makes Lambda(alpha^-d) vanish.
  Bitstream corrected = received;
  int roots = 0;
  for (int d = 0; d < n_; ++d) {
    Element acc = locator[0];
    for (int i = 1; i <= length; ++i) {
      const Element c = locator[static_cast<std::size_t>(i)];
      if (c != 0) acc ^= field_.exp(field_.log(c) - static_cast<long long>(d) * i);
    }
    if (acc == 0) {
      corrected.flip(static_cast<std::size_t>(n_ - 1 - d));
      ++roots;
    }
  }
  if (roots != length) return std::nullopt;
  return DecodeResult{corrected.slice(0, static_cast<std::size_t>(k_)), roots};
}

}  // namespace callshield::gf_bch
