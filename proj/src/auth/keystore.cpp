#include "callshield/auth/keystore.hpp"

#include <sys/stat.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "callshield/errors.hpp"

namespace callshield::auth {

Key key_from_hex(const std::string& hex) {
  Bitstream bits;
  try {
    bits = Bitstream::from_hex(hex);
  } catch (const std::invalid_argument& e) {
    throw KeyStoreError(std::string("invalid key hex: ") + e.what());
  }
  if (bits.size() != 256) throw KeyStoreError("key must be 64 hex digits (256 bits)");
  Key k{};
  const auto bytes = bits.to_bytes();
  std::copy(bytes.begin(), bytes.end(), k.begin());
  return k;
}

std::string key_to_hex(const Key& key) { return Bitstream::from_bytes(key).to_hex(); }

KeyStore KeyStore::from_json_text(const std::string& text) {
  KeyStore ks;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw KeyStoreError("key store must be a JSON object");
    for (const auto& [contact, value] : doc.items()) ks.add(contact, key_from_hex(value.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw KeyStoreError(std::string("key store JSON: ") + e.what());
  }
  return ks;
}

KeyStore KeyStore::load(const std::filesystem::path& path) {
  struct stat st {};
  if (::stat(path.c_str(), &st) != 0) throw KeyStoreError("cannot stat key store " + path.string());
  if ((st.st_mode & 077) != 0) {
    throw KeyStoreError("key store " + path.string() + " is accessible by group/others; chmod 600 it");
  }
  std::ifstream in(path);
  if (!in) throw KeyStoreError("cannot open key store " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void KeyStore::save(const std::filesystem::path& path) const {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [contact, key] : keys_) doc[contact] = key_to_hex(key);
  {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw KeyStoreError("cannot write key store " + path.string());
  }
  std::filesystem::permissions(path, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write,
                               std::filesystem::perm_options::replace);
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << '\n';
}

std::optional<Key> KeyStore::find(const std::string& contact) const {
  const auto it = keys_.find(contact);
  if (it == keys_.end()) return std::nullopt;
  return it->second;
}

}  // namespace callshield::auth
