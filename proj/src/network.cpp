#include "r2p2p/network.hpp"

#include "r2p2p/error.hpp"

namespace r2p2p {

PeerStats snapshot(const PeerCounters& counters) noexcept {
  return PeerStats{counters.messages_handled.load(), counters.relevance_key_calls.load()};
}

std::optional<Message> handle_message(const Message& msg, const Store& store,
                                      std::string_view local_peer_id) {
  if (const auto* req = std::get_if<QueryRequest>(&msg)) {
    QueryResponse resp;
    resp.query_id = req->query_id;
    for (const auto& adv : store.match_query(req->keywords)) {
      resp.advertisements.push_back(serialize_advertisement(adv));
    }
    return resp;
  }
  if (const auto* hello = std::get_if<Hello>(&msg)) {
    if (hello->protocol_version != kProtocolVersion) {
      throw Error(ErrorCode::ProtocolError,
                  "peer '" + hello->peer_id + "' speaks protocol version " +
                      std::to_string(hello->protocol_version) + ", expected " +
                      std::to_string(kProtocolVersion));
    }
    return Hello{std::string(local_peer_id), kProtocolVersion};
  }
  return std::nullopt;
}

}  // namespace r2p2p
