#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "r2p2p/message.hpp"
#include "r2p2p/peer_id.hpp"
#include "r2p2p/store.hpp"

namespace r2p2p {

// Per-peer instrumentation shared by the simulator and the TCP server.
struct PeerCounters {
  std::atomic<std::uint64_t> messages_handled{0};
  std::atomic<std::uint64_t> relevance_key_calls{0};
};

struct PeerStats {
  std::uint64_t messages_handled = 0;
  std::uint64_t relevance_key_calls = 0;

  friend bool operator==(const PeerStats&, const PeerStats&) = default;
};

PeerStats snapshot(const PeerCounters& counters) noexcept;

/// Responder side of the protocol. Answers a QueryRequest with the canonical
/// XML of every local match and a Hello with our own Hello. Responders only
/// match strings; they never rank. Throws ProtocolError when a Hello carries
/// a different protocol version.
std::optional<Message> handle_message(const Message& msg, const Store& store,
                                      std::string_view local_peer_id);

struct PeerResponse {
  PeerId peer;
  QueryResponse response;
};

/// Single-hop fan-out of a query to a known peer set.
class Transport {
 public:
  virtual ~Transport() = default;

  /// Responses that arrive within `timeout`, in arrival order. Lost or late
  /// responses are simply absent. Requires timeout > 0.
  virtual std::vector<PeerResponse> broadcast_query(const QueryRequest& req,
                                                    std::span<const PeerId> peers,
                                                    std::chrono::milliseconds timeout) = 0;
};

}  // namespace r2p2p
