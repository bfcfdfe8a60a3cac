#include "r2p2p/workload.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>
#include <random>

#include "r2p2p/error.hpp"

namespace r2p2p {
namespace {

constexpr std::array<const char*, 20> kVocabulary = {
    "image",    "processing", "segmentation", "neural",  "network",
    "routing",  "peer",       "search",       "ranking", "metadata",
    "wavelet",  "compression", "vision",      "learning", "graph",
    "security", "protocol",   "database",     "retrieval", "sensor"};

std::string capitalized(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 32);
  return word;
}

}  // namespace

Workload populate(SimNetwork& net, const WorkloadOptions& options) {
  if (options.peers < 2) throw Error(ErrorCode::ConfigError, "a workload needs at least 2 peers");
  std::mt19937_64 rng(options.seed ^ 0x9E3779B97F4A7C15ULL);
  const auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  const auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  Workload w;
  std::vector<Credential> authors;
  std::vector<Credential> raters;
  for (std::size_t i = 0; i < options.peers; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "peer-%02zu", i);
    PeerId id{name};
    CredentialRegistry registry;
    Credential author{"author@" + id.value, "tok-a-" + id.value, Role::Author};
    Credential rater{"rater@" + id.value, "tok-r-" + id.value, Role::Rater};
    registry.grant(author.principal_id, author.role, author.token);
    registry.grant(rater.principal_id, rater.role, rater.token);
    net.add_peer(id, std::move(registry));
    w.peers.push_back(id);
    authors.push_back(author);
    raters.push_back(rater);
  }

  struct Placed {
    std::string id;
    std::set<std::size_t> holders;
    std::string title;
  };
  std::vector<Placed> placed;
  for (std::size_t d = 0; d < options.documents; ++d) {
    const auto origin = pick(options.peers);
    std::array<std::string, 3> words;
    for (auto& word : words) word = kVocabulary[pick(kVocabulary.size())];
    std::optional<RatingElement> rating;
    if (!chance(options.unrated_fraction)) {
      rating = RatingElement{pick(501), static_cast<Level>('A' + pick(4)),
                             static_cast<Descriptor>('E' + pick(3))};
    }
    std::string title;
    switch (rating ? rating->descriptor : Descriptor::F) {
      case Descriptor::E:
        title = "Basics of " + capitalized(words[0]) + ' ' + capitalized(words[1]);
        break;
      case Descriptor::F:
        title = "Tutorial: " + capitalized(words[0]) + ' ' + words[1] + " and " + words[2];
        break;
      case Descriptor::G:
        title = capitalized(words[0]) + ' ' + words[1] + " for " + words[2] + ": a study";
        break;
    }
    const auto summary = "Notes on " + words[1] + ' ' + words[2] + " (" + std::to_string(d) + ")";
    const auto content = title + "\n" + summary + "\n";
    auto& origin_store = net.store(w.peers[origin]);
    const auto adv = origin_store.publish(title, summary, content, rating, authors[origin]);

    Placed p{adv.id, {origin}, title};
    if (rating && chance(options.stale_copy_fraction)) {
      auto other = pick(options.peers - 1);
      if (other >= origin) ++other;
      net.store(w.peers[other]).import_record(origin_store.lookup(adv.id));
      auto revised = *rating;
      revised.citations += 1 + pick(50);
      origin_store.revise_rating(adv.id, revised, raters[origin]);
      p.holders.insert(other);
    }
    placed.push_back(std::move(p));
  }

  std::vector<std::size_t> askers(options.peers);
  std::iota(askers.begin(), askers.end(), 0);
  if (options.issuers > 0 && options.issuers < options.peers) {
    std::shuffle(askers.begin(), askers.end(), rng);
    askers.resize(options.issuers);
  }

  for (std::size_t q = 0; q < options.queries && !placed.empty(); ++q) {
    SimulatedQuery query;
    const auto issuer = askers[pick(askers.size())];
    query.issuer = w.peers[issuer];
    const Placed* target = nullptr;
    for (int attempt = 0; attempt < 64 && target == nullptr; ++attempt) {
      const auto& cand = placed[pick(placed.size())];
      if (cand.holders.size() > 1 || !cand.holders.contains(issuer)) target = &cand;
    }
    if (target == nullptr) target = &placed.front();
    auto tokens = tokenize(target->title);
    std::erase_if(tokens, [](const std::string& t) { return t.size() < 4; });
    query.keywords.push_back(tokens[pick(tokens.size())]);
    if (chance(0.5)) query.keywords.push_back(tokens[pick(tokens.size())]);
    query.profile.level = static_cast<Level>('A' + pick(4));
    if (chance(0.7)) query.profile.desired_descriptor = static_cast<Descriptor>('E' + pick(3));
    w.queries.push_back(std::move(query));
  }
  return w;
}

SimulationReport run_simulation(const SimulationOptions& options) {
  SimNetwork net(options.workload.seed, options.policy);
  const auto workload = populate(net, options.workload);

  SimulationReport report;
  std::uint64_t index = 0;
  for (auto query : workload.queries) {
    if (options.profile) query.profile = *options.profile;
    if (!options.keywords.empty()) query.keywords = options.keywords;
    auto transport = net.transport_for(query.issuer);
    QueryEngine engine(*transport, query.issuer.value, options.workload.seed + index++);
    auto outcome = net.run_as(query.issuer, [&] {
      return engine.search(query.keywords, query.profile, workload.peers, options.timeout);
    });
    report.issuers.insert(query.issuer);
    report.runs.push_back({std::move(query), std::move(outcome)});
  }
  for (const auto& p : workload.peers) report.peer_stats[p] = net.stats(p);
  report.delivered_corruptions = net.delivered_corruptions();
  report.dropped_responses = net.dropped_responses();
  report.late_responses = net.late_responses();
  report.trace = net.trace();
  return report;
}

}  // namespace r2p2p
