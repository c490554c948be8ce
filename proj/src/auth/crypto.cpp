#include "callshield/auth/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <stdexcept>

namespace callshield::auth {

namespace {

void put_be64(std::uint8_t* out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v & 0xffU);
    v >>= 8;
  }
}

std::uint64_t get_be64(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

std::array<std::uint8_t, 32> hmac_sha256(const std::uint8_t* key, std::size_t key_len, const std::uint8_t* msg, std::size_t len) {
  std::array<std::uint8_t, 32> out{};
  unsigned int out_len = 0;
  if (HMAC(EVP_sha256(), key, static_cast<int>(key_len), msg, len, out.data(), &out_len) == nullptr || out_len != out.size()) {
    throw std::runtime_error("HMAC-SHA256 failed");
  }
  return out;
}

}  // namespace

std::array<std::uint8_t, 16> Challenge::bytes() const {
  std::array<std::uint8_t, 16> b{};
  put_be64(b.data(), nonce);
  put_be64(b.data() + 8, session_id);
  return b;
}

Bitstream Challenge::to_bits() const {
  const auto b = bytes();
  return Bitstream::from_bytes(b);
}

Challenge Challenge::from_bits(const Bitstream& bits) {
  if (bits.size() != 128) throw std::invalid_argument("challenge must be 128 bits");
  const auto b = bits.to_bytes();
  return {get_be64(b.data()), get_be64(b.data() + 8)};
}

Bitstream MacResponse::to_bits() const { return Bitstream::from_bytes(mac); }

MacResponse MacResponse::from_bits(const Bitstream& bits) {
  if (bits.size() != 128) throw std::invalid_argument("MAC must be 128 bits");
  MacResponse r;
  const auto b = bits.to_bytes();
  std::copy(b.begin(), b.end(), r.mac.begin());
  return r;
}

MacResponse compute_mac(const Key& key, const Challenge& challenge) {
  const auto msg = challenge.bytes();
  const auto full = hmac_sha256(key.data(), key.size(), msg.data(), msg.size());
  MacResponse r;
  std::copy_n(full.begin(), r.mac.size(), r.mac.begin());
  return r;
}

bool verify_mac(const Key& key, const Challenge& challenge, const MacResponse& received) {
  const auto expected = compute_mac(key, challenge);
  return CRYPTO_memcmp(expected.mac.data(), received.mac.data(), expected.mac.size()) == 0;
}

SeededNonceSource::SeededNonceSource(std::uint64_t seed) { put_be64(key_.data(), seed); }

std::uint64_t SeededNonceSource::next() {
  std::array<std::uint8_t, 8> block{};
  put_be64(block.data(), counter_++);
  const auto out = hmac_sha256(key_.data(), key_.size(), block.data(), block.size());
  return get_be64(out.data());
}

std::uint64_t OsNonceSource::next() {
  std::array<std::uint8_t, 8> b{};
  if (RAND_bytes(b.data(), static_cast<int>(b.size())) != 1) throw std::runtime_error("RAND_bytes failed");
  return get_be64(b.data());
}

Key random_key(NonceSource& source) {
  Key k{};
  for (std::size_t i = 0; i < k.size(); i += 8) put_be64(k.data() + i, source.next());
  return k;
}

}  // namespace callshield::auth
