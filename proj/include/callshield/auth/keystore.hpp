#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "callshield/auth/crypto.hpp"

namespace callshield::auth {

/// contact id -> 256-bit shared key. Files are JSON objects of hex keys and
/// must not be readable by group or others.
class KeyStore {
 public:
  static KeyStore load(const std::filesystem::path& path);
  static KeyStore from_json_text(const std::string& text);
  /// Writes with mode 0600.
  void save(const std::filesystem::path& path) const;

  void add(const std::string& contact, const Key& key) { keys_[contact] = key; }
  std::optional<Key> find(const std::string& contact) const;
  std::size_t size() const noexcept { return keys_.size(); }

 private:
  std::map<std::string, Key> keys_;
};

Key key_from_hex(const std::string& hex);
std::string key_to_hex(const Key& key);

}  // namespace callshield::auth
