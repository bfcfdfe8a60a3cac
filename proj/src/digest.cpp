#include "r2p2p/digest.hpp"

#include <openssl/evp.h>

#include <memory>

#include "r2p2p/error.hpp"

namespace r2p2p {
namespace {

const EVP_MD* lookup(std::string_view algorithm) {
  return EVP_get_digestbyname(std::string(algorithm).c_str());
}

}  // namespace

bool digest_available(std::string_view algorithm) {
  return lookup(algorithm) != nullptr;
}

std::string hex_digest(std::string_view algorithm, std::string_view data) {
  const EVP_MD* md = lookup(algorithm);
  if (md == nullptr) {
    throw Error(ErrorCode::ConfigError,
                "unknown digest algorithm '" + std::string(algorithm) + "'");
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out, &len) != 1) {
    throw Error(ErrorCode::IoError, "digest computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[out[i] >> 4]);
    hex.push_back(kHex[out[i] & 0x0F]);
  }
  return hex;
}

bool is_lower_hex(std::string_view text) noexcept {
  if (text.empty()) return false;
  for (char c : text) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace r2p2p
