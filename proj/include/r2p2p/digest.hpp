#pragma once

#include <string>
#include <string_view>

namespace r2p2p {

inline constexpr std::string_view kDefaultDigest = "sha256";

/// Lowercase hex digest of `data` using a named OpenSSL message digest
/// ("sha256", "sha512", "sha3-256", ...). Throws ConfigError for an unknown
/// algorithm name.
std::string hex_digest(std::string_view algorithm, std::string_view data);

/// True if `name` resolves to a digest algorithm usable by hex_digest.
bool digest_available(std::string_view algorithm);

bool is_lower_hex(std::string_view text) noexcept;

}  // namespace r2p2p
