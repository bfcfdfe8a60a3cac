#pragma once

// Seeded synthetic workloads for the simulator: peers with authored
// documents, stale cached copies of some of them, and a query schedule.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "r2p2p/queryengine.hpp"
#include "r2p2p/sim.hpp"

namespace r2p2p {

struct WorkloadOptions {
  std::uint64_t seed = 1;
  std::size_t peers = 10;
  std::size_t documents = 100;
  std::size_t queries = 50;
  double unrated_fraction = 0.1;
  // Share of documents cached on a second peer and then re-rated at origin,
  // leaving the cached copy one revision behind.
  double stale_copy_fraction = 0.2;
  // Queries come from this many randomly chosen peers; 0 lets any peer ask.
  std::size_t issuers = 0;
};

struct SimulatedQuery {
  PeerId issuer;
  std::vector<std::string> keywords;
  UserProfile profile;
};

struct Workload {
  std::vector<PeerId> peers;
  std::vector<SimulatedQuery> queries;
};

/// Adds peers and documents to `net`. Every generated query's keywords come
/// from a document held by some peer other than its issuer.
Workload populate(SimNetwork& net, const WorkloadOptions& options);

struct SimulationOptions {
  WorkloadOptions workload;
  SimPolicy policy;
  std::chrono::milliseconds timeout{1000};
  std::optional<UserProfile> profile;  // replaces every generated profile
  std::vector<std::string> keywords;   // replaces generated keywords when non-empty
};

struct QueryRun {
  SimulatedQuery query;
  SearchOutcome outcome;
};

struct SimulationReport {
  std::vector<QueryRun> runs;
  std::map<PeerId, PeerStats> peer_stats;
  std::set<PeerId> issuers;
  std::uint64_t delivered_corruptions = 0;
  std::uint64_t dropped_responses = 0;
  std::uint64_t late_responses = 0;
  std::vector<std::string> trace;
};

SimulationReport run_simulation(const SimulationOptions& options);

}  // namespace r2p2p
