#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "r2p2p/digest.hpp"

namespace r2p2p {

enum class Role { Author, Rater, Reader };

std::string_view to_string(Role role) noexcept;
std::optional<Role> role_from_string(std::string_view text) noexcept;

struct Credential {
  std::string principal_id;
  std::string token;
  Role role = Role::Reader;
};

// Local principal table. Tokens are kept only as digests; on disk each line
// reads `principal_id<TAB>role<TAB>token_digest`. Blank lines and lines
// starting with '#' are ignored.
class CredentialRegistry {
 public:
  explicit CredentialRegistry(std::string digest_algorithm = std::string(kDefaultDigest));

  static CredentialRegistry load(const std::filesystem::path& file,
                                 std::string digest_algorithm = std::string(kDefaultDigest));
  void save(const std::filesystem::path& file) const;

  void grant(const std::string& principal_id, Role role, std::string_view token);

  /// True when the principal exists with exactly `cred.role` and the token
  /// digest matches.
  bool authenticate(const Credential& cred) const;

  std::optional<Role> role_of(std::string_view principal_id) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& digest_algorithm() const noexcept { return algorithm_; }

 private:
  struct Entry {
    Role role;
    std::string token_digest;
  };
  std::map<std::string, Entry, std::less<>> entries_;
  std::string algorithm_;
};

}  // namespace r2p2p
