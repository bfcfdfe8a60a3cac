// r2p2p command-line front end. Talks to the library only through the C API.

#include <r2p2p/r2p2p.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kAuthorization = 3,
  kValidation = 4,
  kTransport = 5,
};

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

int exit_code_for(r2p2p_status status) {
  switch (status) {
    case R2P2P_OK:
      return kOk;
    case R2P2P_ERR_USAGE:
    case R2P2P_ERR_CONFIG:
      return kUsage;
    case R2P2P_ERR_UNAUTHORIZED:
      return kAuthorization;
    case R2P2P_ERR_INVALID_RATING:
    case R2P2P_ERR_INVALID_CODE:
    case R2P2P_ERR_INVALID_CITATIONS:
    case R2P2P_ERR_MALFORMED_XML:
    case R2P2P_ERR_MISSING_FIELD:
    case R2P2P_ERR_UNEXPECTED_ELEMENT:
    case R2P2P_ERR_INVALID_FIELD:
    case R2P2P_ERR_UNKNOWN_ENTITY:
    case R2P2P_ERR_UNKNOWN_DOCTYPE:
    case R2P2P_ERR_NOT_FOUND:
    case R2P2P_ERR_INTEGRITY:
      return kValidation;
    case R2P2P_ERR_PROTOCOL:
    case R2P2P_ERR_TRANSPORT:
      return kTransport;
    case R2P2P_ERR_IO:
    case R2P2P_ERR_INTERNAL:
      return kFailure;
  }
  return kFailure;
}

struct Failure {
  r2p2p_status status;
};

void check(r2p2p_status status) {
  if (status != R2P2P_OK) {
    std::cerr << "r2p2p: " << r2p2p_last_error() << '\n';
    throw Failure{status};
  }
}

// Owns a library string.
struct LibString {
  char* p = nullptr;
  ~LibString() { r2p2p_free(p); }
  std::string_view view() const { return p == nullptr ? std::string_view{} : p; }
};

struct NodeHandle {
  r2p2p_node* node = nullptr;
  explicit NodeHandle(const std::string& config) { check(r2p2p_node_open(config.c_str(), &node)); }
  ~NodeHandle() { r2p2p_node_close(node); }
};

// Accepts a single-letter code as-is (the library validates it) or a
// table name such as "Professor" / "Research paper".
char level_arg(const std::string& text) {
  if (text.size() == 1) return text[0];
  char code = 0;
  check(r2p2p_level_code(text.c_str(), &code));
  return code;
}

char descriptor_arg(const std::string& text) {
  if (text.size() == 1) return text[0];
  char code = 0;
  check(r2p2p_descriptor_code(text.c_str(), &code));
  return code;
}

struct RatingFlags {
  std::int64_t citations = 0;
  std::string level;
  std::string descriptor;
};

void add_rating_flags(CLI::App* cmd, RatingFlags& flags, bool required) {
  auto* c = cmd->add_option("--citations", flags.citations, "Citation count");
  auto* l = cmd->add_option("--level", flags.level, "Audience level code A-D or user kind");
  auto* d = cmd->add_option("--descriptor", flags.descriptor,
                            "Document type code E-G or name (Basics, Tutorial, Research paper)");
  if (required) {
    c->required();
    l->required();
    d->required();
  }
}

r2p2p_rating to_rating(const RatingFlags& f) {
  return r2p2p_rating{f.citations, level_arg(f.level), descriptor_arg(f.descriptor)};
}

struct Identity {
  std::string principal;
  std::string role;
  std::string token;
};

void add_identity_flags(CLI::App* cmd, Identity& id) {
  cmd->add_option("--as", id.principal, "Acting principal")->required();
  cmd->add_option("--role", id.role, "Claimed role (default: the registered one)");
  cmd->add_option("--token", id.token, "Principal token")->envname("R2P2P_TOKEN")->required();
}

const char* role_or_null(const Identity& id) { return id.role.empty() ? nullptr : id.role.c_str(); }

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "r2p2p: cannot read " << path << '\n';
    throw Failure{R2P2P_ERR_IO};
  }
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

r2p2p_format parse_format(const std::string& f) {
  return f == "lines" ? R2P2P_FORMAT_LINES : R2P2P_FORMAT_HUMAN;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rated-resource peer-to-peer node"};
  app.require_subcommand(1);
  std::string config;

  auto* serve = app.add_subcommand("serve", "Answer queries from peers until interrupted");
  serve->add_option("-c,--config", config, "Node config file")->required();

  std::string file, title, summary;
  bool unrated = false;
  RatingFlags rating;
  Identity who;
  auto* publish = app.add_subcommand("publish", "Publish a document with a rating");
  publish->add_option("-c,--config", config, "Node config file")->required();
  publish->add_option("file", file, "Document file")->required();
  publish->add_option("--title", title, "Document title")->required();
  publish->add_option("--summary", summary, "Short summary");
  publish->add_flag("--unrated", unrated, "Publish without a rating");
  add_rating_flags(publish, rating, false);
  add_identity_flags(publish, who);

  std::string adv_id;
  auto* revise = app.add_subcommand("revise", "Revise the rating of a document");
  revise->add_option("-c,--config", config, "Node config file")->required();
  revise->add_option("id", adv_id, "Advertisement id")->required();
  add_rating_flags(revise, rating, true);
  add_identity_flags(revise, who);

  std::vector<std::string> keywords;
  std::string profile_level, profile_doctype, format = "human";
  int timeout_ms = 2000;
  auto* search = app.add_subcommand("search", "Search the configured peers");
  search->add_option("-c,--config", config, "Node config file")->required();
  search->add_option("keywords", keywords, "Keywords (all must match)")->required();
  search->add_option("--level", profile_level, "Your level code A-D or user kind")->required();
  search->add_option("--doctype", profile_doctype, "Preferred document type E-G or name");
  search->add_option("--timeout", timeout_ms, "Response timeout in milliseconds")
      ->check(CLI::PositiveNumber);
  search->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"human", "lines"}));

  auto* show = app.add_subcommand("show", "Print the advertisement of a local document");
  show->add_option("-c,--config", config, "Node config file")->required();
  show->add_option("id", adv_id, "Advertisement id")->required();

  auto* peers = app.add_subcommand("peers", "Handshake with each configured peer");
  peers->add_option("-c,--config", config, "Node config file")->required();
  peers->add_option("--timeout", timeout_ms, "Handshake timeout in milliseconds")
      ->check(CLI::PositiveNumber);

  std::string principal, role, token;
  auto* grant = app.add_subcommand("grant", "Add or replace a principal in the credential file");
  grant->add_option("-c,--config", config, "Node config file")->required();
  grant->add_option("principal", principal, "Principal id")->required();
  grant->add_option("role", role, "author, rater or reader")
      ->required()
      ->check(CLI::IsMember({"author", "rater", "reader"}));
  grant->add_option("token", token, "Secret token")->required();

  r2p2p_sim_options sim;
  r2p2p_sim_options_default(&sim);
  bool show_trace = false, peer_stats = false;
  auto* simulate = app.add_subcommand("simulate", "Run a seeded in-process network simulation");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--peers", sim.peers, "Number of peers");
  simulate->add_option("--docs", sim.documents, "Number of documents");
  simulate->add_option("--queries", sim.queries, "Number of queries");
  simulate->add_option("--issuers", sim.issuers, "Peers that issue queries (0: any)");
  simulate->add_option("--drop", sim.drop_probability, "Response drop probability")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--corrupt", sim.corrupt_probability,
                       "Per-advertisement corruption probability")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--min-delay", sim.min_delay_ms, "Minimum one-way delay (ms)");
  simulate->add_option("--max-delay", sim.max_delay_ms, "Maximum one-way delay (ms)");
  simulate->add_option("--timeout", sim.timeout_ms, "Query timeout (simulated ms)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--level", profile_level, "Profile level for every query");
  simulate->add_option("--doctype", profile_doctype, "Preferred document type for every query");
  simulate->add_option("--keywords", keywords, "Keywords for every query");
  simulate->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"human", "lines"}));
  simulate->add_flag("--trace", show_trace, "Print the message trace instead of results");
  simulate->add_flag("--peer-stats", peer_stats, "Print per-peer counters to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*serve) {
      NodeHandle h(config);
      r2p2p_server* server = nullptr;
      check(r2p2p_server_start(h.node, &server));
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving " << r2p2p_node_id(h.node) << " on port " << r2p2p_server_port(server)
                << std::endl;
      while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      r2p2p_server_stop(server);
      return kOk;
    }

    if (*publish) {
      NodeHandle h(config);
      const auto content = read_all(file);
      std::optional<r2p2p_rating> r;
      if (!unrated) {
        if (rating.level.empty() || rating.descriptor.empty()) {
          std::cerr << "r2p2p: publish needs --level and --descriptor (or --unrated)\n";
          return kUsage;
        }
        r = to_rating(rating);
      }
      LibString xml;
      check(r2p2p_node_publish(h.node, title.c_str(), summary.c_str(), content.data(),
                               content.size(), r ? &*r : nullptr, who.principal.c_str(),
                               role_or_null(who), who.token.c_str(), &xml.p));
      std::cout << xml.view() << '\n';
      return kOk;
    }

    if (*revise) {
      NodeHandle h(config);
      const auto r = to_rating(rating);
      LibString xml;
      check(r2p2p_node_revise(h.node, adv_id.c_str(), &r, who.principal.c_str(),
                              role_or_null(who), who.token.c_str(), &xml.p));
      std::cout << xml.view() << '\n';
      return kOk;
    }

    if (*search) {
      NodeHandle h(config);
      r2p2p_profile profile{level_arg(profile_level),
                            profile_doctype.empty() ? '\0' : descriptor_arg(profile_doctype)};
      std::vector<const char*> words;
      for (const auto& k : keywords) words.push_back(k.c_str());
      r2p2p_results* results = nullptr;
      check(r2p2p_node_search(h.node, words.data(), words.size(), &profile, timeout_ms,
                              &results));
      LibString text;
      const auto status = r2p2p_results_format(results, parse_format(format), &text.p);
      const auto skipped = r2p2p_results_skipped(results);
      r2p2p_results_free(results);
      check(status);
      std::cout << text.view();
      if (skipped > 0) std::cerr << "r2p2p: skipped " << skipped << " malformed advertisements\n";
      return kOk;
    }

    if (*show) {
      NodeHandle h(config);
      LibString xml;
      check(r2p2p_node_lookup(h.node, adv_id.c_str(), &xml.p));
      std::cout << xml.view() << '\n';
      return kOk;
    }

    if (*peers) {
      NodeHandle h(config);
      LibString report;
      size_t unreachable = 0;
      check(r2p2p_node_check_peers(h.node, timeout_ms, &report.p, &unreachable));
      std::cout << report.view();
      return unreachable == 0 ? kOk : kTransport;
    }

    if (*grant) {
      NodeHandle h(config);
      check(r2p2p_node_grant(h.node, principal.c_str(), role.c_str(), token.c_str()));
      return kOk;
    }

    if (*simulate) {
      std::optional<r2p2p_profile> profile;
      if (!profile_level.empty()) {
        profile = r2p2p_profile{level_arg(profile_level),
                                profile_doctype.empty() ? '\0' : descriptor_arg(profile_doctype)};
        sim.profile = &*profile;
      } else if (!profile_doctype.empty()) {
        std::cerr << "r2p2p: --doctype needs --level\n";
        return kUsage;
      }
      std::vector<const char*> words;
      for (const auto& k : keywords) words.push_back(k.c_str());
      sim.keywords = words.empty() ? nullptr : words.data();
      sim.keyword_count = words.size();

      r2p2p_sim_report* report = nullptr;
      check(r2p2p_simulate(&sim, &report));
      LibString text;
      const auto status = show_trace ? r2p2p_sim_report_trace(report, &text.p)
                                     : r2p2p_sim_report_format(report, parse_format(format),
                                                               &text.p);
      r2p2p_sim_totals totals{};
      r2p2p_sim_report_totals(report, &totals);
      if (peer_stats) {
        for (size_t i = 0; i < r2p2p_sim_report_peer_count(report); ++i) {
          r2p2p_peer_stats ps{};
          if (r2p2p_sim_report_peer(report, i, &ps) == R2P2P_OK) {
            std::cerr << ps.peer << "\tissued=" << ps.issued_queries
                      << "\tmessages=" << ps.messages_handled
                      << "\trelevance_keys=" << ps.relevance_key_calls << '\n';
          }
        }
      }
      r2p2p_sim_report_free(report);
      check(status);
      std::cout << text.view();
      std::cerr << "simulate: queries=" << totals.queries << " results=" << totals.results
                << " skipped_payloads=" << totals.skipped_payloads
                << " delivered_corruptions=" << totals.delivered_corruptions
                << " dropped_responses=" << totals.dropped_responses
                << " late_responses=" << totals.late_responses
                << " conflicts=" << totals.conflicts << '\n';
      return kOk;
    }
  } catch (const Failure& f) {
    return exit_code_for(f.status);
  }
  return kUsage;
}
