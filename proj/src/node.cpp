#include "r2p2p/node.hpp"

#include <random>

#include "r2p2p/error.hpp"

namespace r2p2p {

Node::Node(NodeConfig config) : config_(std::move(config)) {
  auto registry = std::filesystem::exists(config_.credentials)
                      ? CredentialRegistry::load(config_.credentials, config_.digest)
                      : CredentialRegistry(config_.digest);
  StoreOptions options;
  options.node_id = config_.node_id;
  options.digest_algorithm = config_.digest;
  options.directory = config_.store_dir;
  store_ = std::make_unique<Store>(std::move(options), std::move(registry));
}

void Node::grant(const std::string& principal_id, Role role, std::string_view token) {
  store_->registry().grant(principal_id, role, token);
  store_->registry().save(config_.credentials);
}

SearchOutcome Node::search(std::span<const std::string> keywords, const UserProfile& profile,
                           std::chrono::milliseconds timeout) {
  std::vector<PeerId> peers;
  for (const auto& p : config_.peers) peers.push_back(PeerId{p});
  TcpTransport transport(config_.node_id);
  QueryEngine engine(transport, config_.node_id, std::random_device{}());
  KeyCounterScope scope(counters_.relevance_key_calls);
  return engine.search(keywords, profile, peers, timeout);
}

std::vector<PeerStatus> Node::check_peers(std::chrono::milliseconds timeout) {
  TcpTransport transport(config_.node_id);
  std::vector<PeerStatus> out;
  for (const auto& p : config_.peers) {
    PeerStatus status;
    status.peer = PeerId{p};
    try {
      status.remote_id = transport.hello(status.peer, timeout, config_.protocol_version).peer_id;
      status.reachable = true;
    } catch (const Error& e) {
      status.error = e.what();
    }
    out.push_back(std::move(status));
  }
  return out;
}

std::unique_ptr<TcpServer> Node::serve() {
  if (config_.listen.empty()) {
    throw Error(ErrorCode::ConfigError, "config lacks a listen address");
  }
  return std::make_unique<TcpServer>(*store_, config_.node_id, parse_endpoint(config_.listen));
}

}  // namespace r2p2p
