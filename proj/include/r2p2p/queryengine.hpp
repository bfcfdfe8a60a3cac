#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "r2p2p/advert.hpp"
#include "r2p2p/network.hpp"
#include "r2p2p/relevance.hpp"

namespace r2p2p {

struct SearchResult {
  DocumentAdvertisement advertisement;
  std::set<PeerId> sources;
  RelevanceKey key;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

struct DedupeOutcome {
  std::vector<SearchResult> results;  // ordered by advertisement id; keys unset
  std::size_t conflicts = 0;
};

/// Collapses copies of one advertisement id to the highest revision and
/// unions their sources. Copies at the same revision whose canonical XML
/// differs count as a conflict; the lexicographically smallest canonical
/// XML wins.
DedupeOutcome dedupe(std::span<const SourcedAdvertisement> advertisements);

struct SearchOutcome {
  std::vector<SearchResult> results;
  std::size_t responses = 0;          // responses accepted
  std::size_t skipped_payloads = 0;   // advertisements that failed to parse
  std::size_t conflicts = 0;          // same-revision disagreements
  std::size_t foreign_responses = 0;  // responses echoing an unknown query id
};

/// The querying peer's pipeline: fan out, parse every returned
/// advertisement locally, deduplicate, compute relevance keys and sort.
class QueryEngine {
 public:
  QueryEngine(Transport& transport, std::string node_id, std::uint64_t seed);

  SearchOutcome search(std::span<const std::string> keywords, const UserProfile& profile,
                       std::span<const PeerId> peers, std::chrono::milliseconds timeout);

 private:
  std::string next_query_id();

  Transport& transport_;
  std::string node_id_;
  std::mt19937_64 rng_;
  std::uint64_t sequence_ = 0;
};

/// `rank<TAB>id<TAB>citations<TAB>level<TAB>descriptor<TAB>title`, one line
/// per result, ranks from 1. Unrated results print '-' for the three rating
/// columns; tabs and line breaks inside titles become spaces.
std::string format_lines(std::span<const SearchResult> results);

std::string format_human(std::span<const SearchResult> results);

}  // namespace r2p2p
