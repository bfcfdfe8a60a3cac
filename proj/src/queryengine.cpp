#include "r2p2p/queryengine.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "r2p2p/error.hpp"

namespace r2p2p {
namespace {

std::string flatten(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

DedupeOutcome dedupe(std::span<const SourcedAdvertisement> advertisements) {
  struct Group {
    const DocumentAdvertisement* best = nullptr;
    std::string best_xml;
    std::set<PeerId> sources;
    bool conflicted = false;
  };
  std::map<std::string, Group> groups;
  for (const auto& [adv, peer] : advertisements) {
    auto& g = groups[adv.id];
    g.sources.insert(peer);
    auto xml = serialize_advertisement(adv);
    if (g.best == nullptr || adv.revision > g.best->revision) {
      g.best = &adv;
      g.best_xml = std::move(xml);
      g.conflicted = false;
    } else if (adv.revision == g.best->revision && xml != g.best_xml) {
      g.conflicted = true;
      if (xml < g.best_xml) {
        g.best = &adv;
        g.best_xml = std::move(xml);
      }
    }
  }

  DedupeOutcome out;
  out.results.reserve(groups.size());
  for (auto& [id, g] : groups) {
    if (g.conflicted) ++out.conflicts;
    SearchResult r;
    r.advertisement = *g.best;
    r.sources = std::move(g.sources);
    out.results.push_back(std::move(r));
  }
  return out;
}

QueryEngine::QueryEngine(Transport& transport, std::string node_id, std::uint64_t seed)
    : transport_(transport), node_id_(std::move(node_id)), rng_(seed) {}

std::string QueryEngine::next_query_id() {
  std::ostringstream id;
  id << node_id_ << "-q" << ++sequence_ << '-' << std::hex << rng_();
  return id.str();
}

SearchOutcome QueryEngine::search(std::span<const std::string> keywords,
                                  const UserProfile& profile, std::span<const PeerId> peers,
                                  std::chrono::milliseconds timeout) {
  QueryRequest req;
  req.query_id = next_query_id();
  req.keywords.assign(keywords.begin(), keywords.end());

  SearchOutcome outcome;
  std::vector<SourcedAdvertisement> gathered;
  for (auto& [peer, resp] : transport_.broadcast_query(req, peers, timeout)) {
    if (resp.query_id != req.query_id) {
      ++outcome.foreign_responses;
      continue;
    }
    ++outcome.responses;
    for (const auto& xml : resp.advertisements) {
      try {
        gathered.emplace_back(parse_advertisement(xml), peer);
      } catch (const Error&) {
        ++outcome.skipped_payloads;
      }
    }
  }

  auto deduped = dedupe(gathered);
  outcome.conflicts = deduped.conflicts;
  outcome.results = std::move(deduped.results);
  for (auto& r : outcome.results) {
    r.key = relevance_key(r.advertisement.rating, r.advertisement.id, profile);
  }
  std::ranges::sort(outcome.results, {}, &SearchResult::key);
  return outcome;
}

std::string format_lines(std::span<const SearchResult> results) {
  std::string out;
  std::size_t rank = 0;
  for (const auto& r : results) {
    const auto& adv = r.advertisement;
    out += std::to_string(++rank);
    out += '\t';
    out += adv.id;
    out += '\t';
    if (adv.rating) {
      out += std::to_string(adv.rating->citations);
      out += '\t';
      out += to_char(adv.rating->level);
      out += '\t';
      out += to_char(adv.rating->descriptor);
    } else {
      out += "-\t-\t-";
    }
    out += '\t';
    out += flatten(adv.title);
    out += '\n';
  }
  return out;
}

std::string format_human(std::span<const SearchResult> results) {
  std::ostringstream out;
  std::size_t rank = 0;
  for (const auto& r : results) {
    const auto& adv = r.advertisement;
    out << ++rank << ". " << flatten(adv.title) << "\n   id " << adv.id << "  rev "
        << adv.revision << "  by " << adv.author_id << '\n';
    if (adv.rating) {
      out << "   rating: " << adv.rating->citations << " citations, level "
          << to_char(adv.rating->level) << " (" << display_name(decode_level(adv.rating->level))
          << "), " << display_name(decode_descriptor(adv.rating->descriptor)) << '\n';
    } else {
      out << "   unrated\n";
    }
    out << "   sources:";
    for (const auto& p : r.sources) out << ' ' << p.value;
    out << '\n';
  }
  return out.str();
}

}  // namespace r2p2p
