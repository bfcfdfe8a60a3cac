#pragma once

#include <compare>
#include <functional>
#include <string>

namespace r2p2p {

// Opaque peer identity. In TCP mode this is the peer's "host:port" address.
struct PeerId {
  std::string value;

  friend auto operator<=>(const PeerId&, const PeerId&) = default;
};

}  // namespace r2p2p

template <>
struct std::hash<r2p2p::PeerId> {
  std::size_t operator()(const r2p2p::PeerId& p) const noexcept {
    return std::hash<std::string>{}(p.value);
  }
};
