#include "r2p2p/credentials.hpp"

#include <openssl/crypto.h>

#include <fstream>
#include <sstream>

#include "r2p2p/error.hpp"
#include "r2p2p/fileio.hpp"

namespace r2p2p {

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Author: return "author";
    case Role::Rater: return "rater";
    case Role::Reader: return "reader";
  }
  return "";
}

std::optional<Role> role_from_string(std::string_view text) noexcept {
  if (text == "author") return Role::Author;
  if (text == "rater") return Role::Rater;
  if (text == "reader") return Role::Reader;
  return std::nullopt;
}

CredentialRegistry::CredentialRegistry(std::string digest_algorithm)
    : algorithm_(std::move(digest_algorithm)) {
  if (!digest_available(algorithm_)) {
    throw Error(ErrorCode::ConfigError, "unknown digest algorithm '" + algorithm_ + "'");
  }
}

CredentialRegistry CredentialRegistry::load(const std::filesystem::path& file,
                                            std::string digest_algorithm) {
  CredentialRegistry registry(std::move(digest_algorithm));
  std::ifstream in(file);
  if (!in) {
    throw Error(ErrorCode::ConfigError, "cannot open credential file " + file.string());
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    const auto where = file.string() + ":" + std::to_string(lineno);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw Error(ErrorCode::ConfigError, where + ": expected principal<TAB>role<TAB>digest");
    }
    const auto principal = line.substr(0, t1);
    const auto role = role_from_string(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    const auto digest = line.substr(t2 + 1);
    if (principal.empty() || !role || !is_lower_hex(digest)) {
      throw Error(ErrorCode::ConfigError, where + ": malformed credential entry");
    }
    registry.entries_[principal] = Entry{*role, digest};
  }
  return registry;
}

void CredentialRegistry::save(const std::filesystem::path& file) const {
  std::ostringstream out;
  for (const auto& [principal, entry] : entries_) {
    out << principal << '\t' << to_string(entry.role) << '\t' << entry.token_digest << '\n';
  }
  write_file_atomic(file, out.str());
}

void CredentialRegistry::grant(const std::string& principal_id, Role role,
                               std::string_view token) {
  if (principal_id.empty() || principal_id.find_first_of("\t\n\r") != std::string::npos) {
    throw Error(ErrorCode::ConfigError, "principal id must be non-empty without tabs or newlines");
  }
  entries_[principal_id] = Entry{role, hex_digest(algorithm_, token)};
}

bool CredentialRegistry::authenticate(const Credential& cred) const {
  const auto it = entries_.find(cred.principal_id);
  if (it == entries_.end() || it->second.role != cred.role) return false;
  const auto presented = hex_digest(algorithm_, cred.token);
  const auto& stored = it->second.token_digest;
  return presented.size() == stored.size() &&
         CRYPTO_memcmp(presented.data(), stored.data(), stored.size()) == 0;
}

std::optional<Role> CredentialRegistry::role_of(std::string_view principal_id) const {
  const auto it = entries_.find(principal_id);
  if (it == entries_.end()) return std::nullopt;
  return it->second.role;
}

}  // namespace r2p2p
