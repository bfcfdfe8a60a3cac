#include "r2p2p/sim.hpp"

#include <queue>
#include <sstream>
#include <stdexcept>

#include "r2p2p/digest.hpp"
#include "r2p2p/error.hpp"

namespace r2p2p {
namespace {

struct InFlight {
  std::uint64_t at = 0;
  std::uint64_t seq = 0;
  PeerId from;
  PeerId to;
  std::string wire;
  std::uint64_t corrupted_payloads = 0;

  bool operator>(const InFlight& o) const noexcept {
    return at != o.at ? at > o.at : seq > o.seq;
  }
};

class SimTransport final : public Transport {
 public:
  SimTransport(SimNetwork& net, PeerId self) : net_(net), self_(std::move(self)) {}

  std::vector<PeerResponse> broadcast_query(const QueryRequest& req,
                                            std::span<const PeerId> peers,
                                            std::chrono::milliseconds timeout) override {
    return net_.broadcast_query(self_, req, peers, timeout);
  }

 private:
  SimNetwork& net_;
  PeerId self_;
};

// A strict prefix of a document always lacks its final '>' and so can never
// be well-formed.
std::string corrupt(const std::string& payload) { return payload.substr(0, payload.size() / 2); }

}  // namespace

SimNetwork::SimNetwork(std::uint64_t seed, SimPolicy policy)
    : rng_(seed), policy_(std::move(policy)) {}

SimNetwork::~SimNetwork() = default;

Store& SimNetwork::add_peer(const PeerId& id, CredentialRegistry registry) {
  if (peers_.contains(id)) {
    throw Error(ErrorCode::ConfigError, "duplicate simulated peer '" + id.value + "'");
  }
  StoreOptions options;
  options.node_id = id.value;
  options.digest_algorithm = registry.digest_algorithm();
  auto& p = peers_[id];
  p.store = std::make_unique<Store>(std::move(options), std::move(registry));
  return *p.store;
}

const SimNetwork::Peer& SimNetwork::peer(const PeerId& id) const {
  const auto it = peers_.find(id);
  if (it == peers_.end()) {
    throw Error(ErrorCode::NotFound, "no simulated peer '" + id.value + "'");
  }
  return it->second;
}

Store& SimNetwork::store(const PeerId& id) { return *peer(id).store; }

PeerCounters& SimNetwork::counters(const PeerId& id) {
  return const_cast<Peer&>(peer(id)).counters;
}

std::vector<PeerId> SimNetwork::peers() const {
  std::vector<PeerId> out;
  for (const auto& [id, p] : peers_) out.push_back(id);
  return out;
}

PeerStats SimNetwork::stats(const PeerId& id) const { return snapshot(peer(id).counters); }

std::unique_ptr<Transport> SimNetwork::transport_for(const PeerId& self) {
  peer(self);
  return std::make_unique<SimTransport>(*this, self);
}

void SimNetwork::record(std::uint64_t at, std::string_view what, const PeerId& from,
                        const PeerId& to, std::string_view detail) {
  std::ostringstream line;
  line << at << ' ' << what << ' ' << from.value << "->" << to.value << ' ' << detail;
  trace_.push_back(line.str());
}

std::vector<PeerResponse> SimNetwork::broadcast_query(const PeerId& from,
                                                      const QueryRequest& req,
                                                      std::span<const PeerId> targets,
                                                      std::chrono::milliseconds timeout) {
  if (timeout.count() <= 0) throw std::invalid_argument("broadcast timeout must be positive");
  peer(from);

  const auto start = now_ms_;
  const auto deadline = start + static_cast<std::uint64_t>(timeout.count());
  std::uniform_int_distribution<std::uint32_t> delay(policy_.min_delay_ms,
                                                     std::max(policy_.min_delay_ms,
                                                              policy_.max_delay_ms));
  std::bernoulli_distribution drop(policy_.drop_probability);
  std::bernoulli_distribution damage(policy_.corrupt_probability);

  std::priority_queue<InFlight, std::vector<InFlight>, std::greater<>> queue;
  const auto request_wire = encode_message(req);
  for (const auto& to : targets) {
    if (to == from) continue;
    InFlight m{start + delay(rng_), sequence_++, from, to, request_wire, 0};
    record(start, "send", from, to, "QueryRequest " + req.query_id);
    queue.push(std::move(m));
  }

  std::vector<PeerResponse> collected;
  while (!queue.empty()) {
    auto m = queue.top();
    queue.pop();
    now_ms_ = std::max(now_ms_, m.at);
    const auto digest = hex_digest("sha256", m.wire).substr(0, 16);

    if (m.to == from) {
      // A response arriving back at the querying peer.
      if (m.at > deadline) {
        ++late_responses_;
        record(m.at, "late", m.from, m.to, digest);
        continue;
      }
      auto msg = decode_message(m.wire);
      counters(from).messages_handled.fetch_add(1);
      delivered_corruptions_ += m.corrupted_payloads;
      record(m.at, "deliver", m.from, m.to, "QueryResponse " + digest);
      collected.push_back({m.from, std::get<QueryResponse>(std::move(msg))});
      continue;
    }

    auto it = peers_.find(m.to);
    if (it == peers_.end()) {
      record(m.at, "unreachable", m.from, m.to, digest);
      continue;
    }
    auto& responder = it->second;
    record(m.at, "deliver", m.from, m.to, "QueryRequest " + digest);
    std::optional<Message> reply;
    {
      KeyCounterScope scope(responder.counters.relevance_key_calls);
      responder.counters.messages_handled.fetch_add(1);
      reply = handle_message(decode_message(m.wire), *responder.store, m.to.value);
    }
    if (!reply) continue;

    auto& resp = std::get<QueryResponse>(*reply);
    std::uint64_t damaged = 0;
    for (auto& payload : resp.advertisements) {
      if (damage(rng_)) {
        payload = corrupt(payload);
        ++damaged;
      }
    }
    const bool forced = policy_.drop_responses_from.contains(m.to);
    if (drop(rng_) || forced) {
      ++dropped_responses_;
      record(m.at, "drop", m.to, from, "QueryResponse");
      continue;
    }
    InFlight back{m.at + delay(rng_), sequence_++, m.to, from, encode_message(*reply), damaged};
    record(m.at, "send", m.to, from,
           "QueryResponse " + std::to_string(resp.advertisements.size()) + " ads");
    queue.push(std::move(back));
  }
  now_ms_ = std::max(now_ms_, deadline);
  return collected;
}

}  // namespace r2p2p
