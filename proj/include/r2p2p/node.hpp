#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "r2p2p/config.hpp"
#include "r2p2p/queryengine.hpp"
#include "r2p2p/store.hpp"
#include "r2p2p/tcp.hpp"

namespace r2p2p {

struct PeerStatus {
  PeerId peer;
  bool reachable = false;
  std::string remote_id;  // from the peer's Hello
  std::string error;      // when unreachable
};

/// A configured peer: its persistent store, credentials and TCP endpoints.
class Node {
 public:
  explicit Node(NodeConfig config);

  const NodeConfig& config() const noexcept { return config_; }
  Store& store() noexcept { return *store_; }

  /// Adds or replaces a principal and rewrites the credential file.
  void grant(const std::string& principal_id, Role role, std::string_view token);

  SearchOutcome search(std::span<const std::string> keywords, const UserProfile& profile,
                       std::chrono::milliseconds timeout);

  std::vector<PeerStatus> check_peers(std::chrono::milliseconds timeout);

  /// Binds the configured listen address and starts answering queries.
  std::unique_ptr<TcpServer> serve();

  PeerStats local_stats() const noexcept { return snapshot(counters_); }

 private:
  NodeConfig config_;
  std::unique_ptr<Store> store_;
  PeerCounters counters_;
};

}  // namespace r2p2p
