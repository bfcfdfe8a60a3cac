#pragma once

// Deterministic single-threaded network simulator.
//
// Messages travel as encoded wire text through a seeded event queue ordered
// by (delivery time, send sequence). Equal seeds and equal call sequences
// give identical traces. The simulator must be driven from one thread.

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "r2p2p/network.hpp"
#include "r2p2p/relevance.hpp"

namespace r2p2p {

struct SimPolicy {
  std::uint32_t min_delay_ms = 1;
  std::uint32_t max_delay_ms = 20;
  double drop_probability = 0.0;     // per response
  double corrupt_probability = 0.0;  // per advertisement payload in a response
  std::set<PeerId> drop_responses_from;
};

class SimNetwork {
 public:
  explicit SimNetwork(std::uint64_t seed, SimPolicy policy = {});
  ~SimNetwork();

  SimNetwork(const SimNetwork&) = delete;
  SimNetwork& operator=(const SimNetwork&) = delete;

  Store& add_peer(const PeerId& id, CredentialRegistry registry);
  Store& store(const PeerId& id);
  std::vector<PeerId> peers() const;

  SimPolicy& policy() noexcept { return policy_; }

  /// Delivers `req` from `from` to each peer, runs the responders, and
  /// collects responses reaching `from` within `timeout` of simulated time.
  std::vector<PeerResponse> broadcast_query(const PeerId& from, const QueryRequest& req,
                                            std::span<const PeerId> peers,
                                            std::chrono::milliseconds timeout);

  /// A Transport whose queries originate at `self`.
  std::unique_ptr<Transport> transport_for(const PeerId& self);

  /// Runs `fn` with relevance_key calls attributed to `peer`.
  template <typename Fn>
  decltype(auto) run_as(const PeerId& peer, Fn&& fn) {
    KeyCounterScope scope(counters(peer).relevance_key_calls);
    return std::forward<Fn>(fn)();
  }

  PeerStats stats(const PeerId& peer) const;
  const std::vector<std::string>& trace() const noexcept { return trace_; }
  std::uint64_t now_ms() const noexcept { return now_ms_; }

  // Totals over responses that actually reached the querying peer in time.
  std::uint64_t delivered_corruptions() const noexcept { return delivered_corruptions_; }
  std::uint64_t dropped_responses() const noexcept { return dropped_responses_; }
  std::uint64_t late_responses() const noexcept { return late_responses_; }

 private:
  struct Peer {
    std::unique_ptr<Store> store;
    PeerCounters counters;
  };

  PeerCounters& counters(const PeerId& id);
  const Peer& peer(const PeerId& id) const;
  void record(std::uint64_t at, std::string_view what, const PeerId& from, const PeerId& to,
              std::string_view detail);

  std::mt19937_64 rng_;
  SimPolicy policy_;
  std::map<PeerId, Peer> peers_;
  std::vector<std::string> trace_;
  std::uint64_t now_ms_ = 0;
  std::uint64_t sequence_ = 0;
  std::uint64_t delivered_corruptions_ = 0;
  std::uint64_t dropped_responses_ = 0;
  std::uint64_t late_responses_ = 0;
};

}  // namespace r2p2p
