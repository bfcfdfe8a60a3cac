#include "r2p2p/r2p2p.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "r2p2p/error.hpp"
#include "r2p2p/node.hpp"
#include "r2p2p/relevance.hpp"
#include "r2p2p/workload.hpp"

struct r2p2p_node {
  std::unique_ptr<r2p2p::Node> impl;
};

struct r2p2p_results {
  r2p2p::SearchOutcome outcome;
};

struct r2p2p_server {
  std::unique_ptr<r2p2p::TcpServer> impl;
};

struct r2p2p_sim_report {
  r2p2p::SimulationReport report;
  std::vector<std::string> peer_names;
};

namespace {

using r2p2p::ErrorCode;

thread_local std::string last_error;

// Argument problems detected at the boundary.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

r2p2p_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedXml: return R2P2P_ERR_MALFORMED_XML;
    case ErrorCode::InvalidCode: return R2P2P_ERR_INVALID_CODE;
    case ErrorCode::InvalidCitations: return R2P2P_ERR_INVALID_CITATIONS;
    case ErrorCode::MissingField: return R2P2P_ERR_MISSING_FIELD;
    case ErrorCode::UnexpectedElement: return R2P2P_ERR_UNEXPECTED_ELEMENT;
    case ErrorCode::InvalidField: return R2P2P_ERR_INVALID_FIELD;
    case ErrorCode::UnknownEntity: return R2P2P_ERR_UNKNOWN_ENTITY;
    case ErrorCode::UnknownDocType: return R2P2P_ERR_UNKNOWN_DOCTYPE;
    case ErrorCode::Unauthorized: return R2P2P_ERR_UNAUTHORIZED;
    case ErrorCode::InvalidRating: return R2P2P_ERR_INVALID_RATING;
    case ErrorCode::NotFound: return R2P2P_ERR_NOT_FOUND;
    case ErrorCode::ProtocolError: return R2P2P_ERR_PROTOCOL;
    case ErrorCode::TransportError: return R2P2P_ERR_TRANSPORT;
    case ErrorCode::ConfigError: return R2P2P_ERR_CONFIG;
    case ErrorCode::IoError: return R2P2P_ERR_IO;
    case ErrorCode::IntegrityError: return R2P2P_ERR_INTEGRITY;
  }
  return R2P2P_ERR_INTERNAL;
}

template <typename Fn>
r2p2p_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return R2P2P_OK;
  } catch (const r2p2p::Error& e) {
    last_error = std::string(r2p2p::to_string(e.code())) + ": " + e.what();
    return to_status(e.code());
  } catch (const UsageError& e) {
    last_error = e.what();
    return R2P2P_ERR_USAGE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return R2P2P_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return R2P2P_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return R2P2P_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw UsageError(what);
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

// Converts without validating codes; the store rejects out-of-range values.
r2p2p::RatingElement to_rating(const r2p2p_rating& r) {
  if (r.citations < 0) {
    throw r2p2p::Error(ErrorCode::InvalidRating, "citations must be non-negative");
  }
  return r2p2p::RatingElement{static_cast<std::uint64_t>(r.citations),
                              static_cast<r2p2p::Level>(r.level),
                              static_cast<r2p2p::Descriptor>(r.descriptor)};
}

r2p2p_rating from_rating(const r2p2p::RatingElement& r) {
  return r2p2p_rating{static_cast<int64_t>(r.citations), r2p2p::to_char(r.level),
                      r2p2p::to_char(r.descriptor)};
}

r2p2p::UserProfile to_profile(const r2p2p_profile& p) {
  r2p2p::UserProfile out;
  const auto level = r2p2p::level_from_char(p.level);
  if (!level) {
    throw r2p2p::Error(ErrorCode::InvalidCode,
                       "profile level '" + std::string(1, p.level) + "' not in A-D");
  }
  out.level = *level;
  if (p.desired_descriptor != 0) {
    const auto d = r2p2p::descriptor_from_char(p.desired_descriptor);
    if (!d) {
      throw r2p2p::Error(ErrorCode::InvalidCode, "profile document type '" +
                                                     std::string(1, p.desired_descriptor) +
                                                     "' not in E-G");
    }
    out.desired_descriptor = *d;
  }
  return out;
}

r2p2p::Credential make_credential(r2p2p::Node& node, const char* principal, const char* role,
                                  const char* token) {
  require(principal != nullptr && token != nullptr, "principal and token are required");
  r2p2p::Credential cred;
  cred.principal_id = principal;
  cred.token = token;
  if (role != nullptr) {
    const auto r = r2p2p::role_from_string(role);
    require(r.has_value(), "role must be author, rater or reader");
    cred.role = *r;
  } else {
    const auto r = node.store().registry().role_of(principal);
    if (!r) {
      throw r2p2p::Error(ErrorCode::Unauthorized,
                         "unknown principal '" + std::string(principal) + "'");
    }
    cred.role = *r;
  }
  return cred;
}

std::string describe(const r2p2p::SimulatedQuery& q) {
  std::string out = q.issuer.value + " [";
  for (std::size_t i = 0; i < q.keywords.size(); ++i) {
    if (i != 0) out += ' ';
    out += q.keywords[i];
  }
  out += "] level=";
  out += r2p2p::to_char(q.profile.level);
  out += " doctype=";
  out += q.profile.desired_descriptor ? r2p2p::to_char(*q.profile.desired_descriptor) : '-';
  return out;
}

}  // namespace

extern "C" {

const char* r2p2p_status_name(r2p2p_status status) {
  switch (status) {
    case R2P2P_OK: return "OK";
    case R2P2P_ERR_USAGE: return "UsageError";
    case R2P2P_ERR_CONFIG: return "ConfigError";
    case R2P2P_ERR_UNAUTHORIZED: return "Unauthorized";
    case R2P2P_ERR_INVALID_RATING: return "InvalidRating";
    case R2P2P_ERR_INVALID_CODE: return "InvalidCode";
    case R2P2P_ERR_INVALID_CITATIONS: return "InvalidCitations";
    case R2P2P_ERR_MALFORMED_XML: return "MalformedXml";
    case R2P2P_ERR_MISSING_FIELD: return "MissingField";
    case R2P2P_ERR_UNEXPECTED_ELEMENT: return "UnexpectedElement";
    case R2P2P_ERR_INVALID_FIELD: return "InvalidField";
    case R2P2P_ERR_UNKNOWN_ENTITY: return "UnknownEntity";
    case R2P2P_ERR_UNKNOWN_DOCTYPE: return "UnknownDocType";
    case R2P2P_ERR_NOT_FOUND: return "NotFound";
    case R2P2P_ERR_PROTOCOL: return "ProtocolError";
    case R2P2P_ERR_TRANSPORT: return "TransportError";
    case R2P2P_ERR_IO: return "IoError";
    case R2P2P_ERR_INTEGRITY: return "IntegrityError";
    case R2P2P_ERR_INTERNAL: return "InternalError";
  }
  return "UnknownStatus";
}

const char* r2p2p_last_error(void) { return last_error.c_str(); }

void r2p2p_free(void* p) { std::free(p); }

int r2p2p_protocol_version(void) { return r2p2p::kProtocolVersion; }

r2p2p_status r2p2p_advert_canonicalize(const char* xml, char** out_xml) {
  return guarded([&] {
    require(xml != nullptr && out_xml != nullptr, "xml and out_xml are required");
    *out_xml = dup_string(r2p2p::serialize_advertisement(r2p2p::parse_advertisement(xml)));
  });
}

r2p2p_status r2p2p_advert_extract_rating(const char* xml, int* has_rating, r2p2p_rating* out) {
  return guarded([&] {
    require(xml != nullptr && has_rating != nullptr && out != nullptr,
            "xml, has_rating and out are required");
    const auto rating = r2p2p::extract_rating(xml);
    *has_rating = rating.has_value() ? 1 : 0;
    if (rating) *out = from_rating(*rating);
  });
}

r2p2p_status r2p2p_level_code(const char* entity_name, char* out_code) {
  return guarded([&] {
    require(entity_name != nullptr && out_code != nullptr, "arguments are required");
    *out_code = r2p2p::to_char(r2p2p::level_code(std::string_view(entity_name)));
  });
}

r2p2p_status r2p2p_descriptor_code(const char* doc_type_name, char* out_code) {
  return guarded([&] {
    require(doc_type_name != nullptr && out_code != nullptr, "arguments are required");
    *out_code = r2p2p::to_char(r2p2p::descriptor_code(std::string_view(doc_type_name)));
  });
}

r2p2p_status r2p2p_decode_level(char code, const char** out_name) {
  return guarded([&] {
    require(out_name != nullptr, "out_name is required");
    *out_name = r2p2p::display_name(r2p2p::decode_level(std::string_view(&code, 1))).data();
  });
}

r2p2p_status r2p2p_decode_descriptor(char code, const char** out_name) {
  return guarded([&] {
    require(out_name != nullptr, "out_name is required");
    *out_name =
        r2p2p::display_name(r2p2p::decode_descriptor(std::string_view(&code, 1))).data();
  });
}

r2p2p_status r2p2p_node_open(const char* config_path, r2p2p_node** out) {
  return guarded([&] {
    require(config_path != nullptr && out != nullptr, "config_path and out are required");
    auto node = std::make_unique<r2p2p_node>();
    node->impl = std::make_unique<r2p2p::Node>(r2p2p::load_config(config_path));
    *out = node.release();
  });
}

void r2p2p_node_close(r2p2p_node* node) { delete node; }

const char* r2p2p_node_id(const r2p2p_node* node) {
  return node == nullptr ? "" : node->impl->config().node_id.c_str();
}

r2p2p_status r2p2p_node_grant(r2p2p_node* node, const char* principal, const char* role,
                              const char* token) {
  return guarded([&] {
    require(node != nullptr && principal != nullptr && role != nullptr && token != nullptr,
            "node, principal, role and token are required");
    const auto r = r2p2p::role_from_string(role);
    require(r.has_value(), "role must be author, rater or reader");
    node->impl->grant(principal, *r, token);
  });
}

r2p2p_status r2p2p_node_publish(r2p2p_node* node, const char* title, const char* summary,
                                const void* content, size_t content_len,
                                const r2p2p_rating* rating, const char* principal,
                                const char* role, const char* token, char** out_xml) {
  return guarded([&] {
    require(node != nullptr && title != nullptr && out_xml != nullptr,
            "node, title and out_xml are required");
    require(content != nullptr || content_len == 0, "content is NULL");
    const auto cred = make_credential(*node->impl, principal, role, token);
    std::optional<r2p2p::RatingElement> r;
    if (rating != nullptr) r = to_rating(*rating);
    const auto adv = node->impl->store().publish(
        title, summary == nullptr ? "" : summary,
        std::string(static_cast<const char*>(content), content_len), r, cred);
    *out_xml = dup_string(r2p2p::serialize_advertisement(adv));
  });
}

r2p2p_status r2p2p_node_revise(r2p2p_node* node, const char* adv_id, const r2p2p_rating* rating,
                               const char* principal, const char* role, const char* token,
                               char** out_xml) {
  return guarded([&] {
    require(node != nullptr && adv_id != nullptr && rating != nullptr && out_xml != nullptr,
            "node, adv_id, rating and out_xml are required");
    const auto cred = make_credential(*node->impl, principal, role, token);
    const auto adv = node->impl->store().revise_rating(adv_id, to_rating(*rating), cred);
    *out_xml = dup_string(r2p2p::serialize_advertisement(adv));
  });
}

r2p2p_status r2p2p_node_lookup(r2p2p_node* node, const char* adv_id, char** out_xml) {
  return guarded([&] {
    require(node != nullptr && adv_id != nullptr && out_xml != nullptr,
            "node, adv_id and out_xml are required");
    const auto record = node->impl->store().lookup(adv_id);
    *out_xml = dup_string(r2p2p::serialize_advertisement(record.advertisement));
  });
}

r2p2p_status r2p2p_node_check_peers(r2p2p_node* node, int timeout_ms, char** out_report,
                                    size_t* out_unreachable) {
  return guarded([&] {
    require(node != nullptr && out_report != nullptr && out_unreachable != nullptr,
            "node, out_report and out_unreachable are required");
    require(timeout_ms > 0, "timeout must be positive");
    std::string report;
    std::size_t unreachable = 0;
    for (const auto& s : node->impl->check_peers(std::chrono::milliseconds(timeout_ms))) {
      report += s.peer.value;
      if (s.reachable) {
        report += "\treachable\t" + s.remote_id + "\n";
      } else {
        ++unreachable;
        report += "\tunreachable\t" + s.error + "\n";
      }
    }
    *out_report = dup_string(report);
    *out_unreachable = unreachable;
  });
}

r2p2p_status r2p2p_node_search(r2p2p_node* node, const char* const* keywords,
                               size_t keyword_count, const r2p2p_profile* profile,
                               int timeout_ms, r2p2p_results** out) {
  return guarded([&] {
    require(node != nullptr && profile != nullptr && out != nullptr,
            "node, profile and out are required");
    require(keywords != nullptr || keyword_count == 0, "keywords is NULL");
    require(timeout_ms > 0, "timeout must be positive");
    std::vector<std::string> words(keywords, keywords + keyword_count);
    auto results = std::make_unique<r2p2p_results>();
    results->outcome = node->impl->search(words, to_profile(*profile),
                                          std::chrono::milliseconds(timeout_ms));
    *out = results.release();
  });
}

size_t r2p2p_results_count(const r2p2p_results* results) {
  return results == nullptr ? 0 : results->outcome.results.size();
}

r2p2p_status r2p2p_results_get(const r2p2p_results* results, size_t index,
                               r2p2p_result_info* out) {
  return guarded([&] {
    require(results != nullptr && out != nullptr, "results and out are required");
    require(index < results->outcome.results.size(), "index out of range");
    const auto& r = results->outcome.results[index];
    const auto& adv = r.advertisement;
    out->id = adv.id.c_str();
    out->title = adv.title.c_str();
    out->author = adv.author_id.c_str();
    out->revision = adv.revision;
    out->rated = adv.rating ? 1 : 0;
    out->rating = adv.rating ? from_rating(*adv.rating) : r2p2p_rating{0, 0, 0};
    out->source_count = r.sources.size();
  });
}

size_t r2p2p_results_skipped(const r2p2p_results* results) {
  return results == nullptr ? 0 : results->outcome.skipped_payloads;
}

size_t r2p2p_results_conflicts(const r2p2p_results* results) {
  return results == nullptr ? 0 : results->outcome.conflicts;
}

r2p2p_status r2p2p_results_format(const r2p2p_results* results, r2p2p_format format,
                                  char** out_text) {
  return guarded([&] {
    require(results != nullptr && out_text != nullptr, "results and out_text are required");
    const auto& list = results->outcome.results;
    *out_text = dup_string(format == R2P2P_FORMAT_LINES ? r2p2p::format_lines(list)
                                                        : r2p2p::format_human(list));
  });
}

void r2p2p_results_free(r2p2p_results* results) { delete results; }

r2p2p_status r2p2p_server_start(r2p2p_node* node, r2p2p_server** out) {
  return guarded([&] {
    require(node != nullptr && out != nullptr, "node and out are required");
    auto server = std::make_unique<r2p2p_server>();
    server->impl = node->impl->serve();
    *out = server.release();
  });
}

uint16_t r2p2p_server_port(const r2p2p_server* server) {
  return server == nullptr ? 0 : server->impl->port();
}

uint64_t r2p2p_server_messages_handled(const r2p2p_server* server) {
  return server == nullptr ? 0 : server->impl->stats().messages_handled;
}

uint64_t r2p2p_server_relevance_key_calls(const r2p2p_server* server) {
  return server == nullptr ? 0 : server->impl->stats().relevance_key_calls;
}

void r2p2p_server_stop(r2p2p_server* server) { delete server; }

void r2p2p_sim_options_default(r2p2p_sim_options* options) {
  if (options == nullptr) return;
  const r2p2p::SimulationOptions defaults;
  *options = r2p2p_sim_options{};
  options->seed = defaults.workload.seed;
  options->peers = defaults.workload.peers;
  options->documents = defaults.workload.documents;
  options->queries = defaults.workload.queries;
  options->issuers = defaults.workload.issuers;
  options->drop_probability = defaults.policy.drop_probability;
  options->corrupt_probability = defaults.policy.corrupt_probability;
  options->min_delay_ms = defaults.policy.min_delay_ms;
  options->max_delay_ms = defaults.policy.max_delay_ms;
  options->timeout_ms = static_cast<int>(defaults.timeout.count());
}

r2p2p_status r2p2p_simulate(const r2p2p_sim_options* options, r2p2p_sim_report** out) {
  return guarded([&] {
    require(options != nullptr && out != nullptr, "options and out are required");
    require(options->timeout_ms > 0, "timeout must be positive");
    require(options->drop_probability >= 0 && options->drop_probability <= 1 &&
                options->corrupt_probability >= 0 && options->corrupt_probability <= 1,
            "probabilities must lie in [0, 1]");
    require(options->keywords != nullptr || options->keyword_count == 0, "keywords is NULL");
    r2p2p::SimulationOptions sim;
    sim.workload.seed = options->seed;
    sim.workload.peers = options->peers;
    sim.workload.documents = options->documents;
    sim.workload.queries = options->queries;
    sim.workload.issuers = options->issuers;
    sim.policy.drop_probability = options->drop_probability;
    sim.policy.corrupt_probability = options->corrupt_probability;
    sim.policy.min_delay_ms = options->min_delay_ms;
    sim.policy.max_delay_ms = options->max_delay_ms;
    sim.timeout = std::chrono::milliseconds(options->timeout_ms);
    if (options->profile != nullptr) sim.profile = to_profile(*options->profile);
    for (size_t i = 0; i < options->keyword_count; ++i) {
      sim.keywords.emplace_back(options->keywords[i]);
    }
    auto report = std::make_unique<r2p2p_sim_report>();
    report->report = r2p2p::run_simulation(sim);
    for (const auto& [peer, stats] : report->report.peer_stats) {
      report->peer_names.push_back(peer.value);
    }
    *out = report.release();
  });
}

void r2p2p_sim_report_totals(const r2p2p_sim_report* report, r2p2p_sim_totals* out) {
  if (report == nullptr || out == nullptr) return;
  *out = r2p2p_sim_totals{};
  const auto& r = report->report;
  out->queries = r.runs.size();
  for (const auto& run : r.runs) {
    out->results += run.outcome.results.size();
    out->skipped_payloads += run.outcome.skipped_payloads;
    out->conflicts += run.outcome.conflicts;
  }
  out->delivered_corruptions = r.delivered_corruptions;
  out->dropped_responses = r.dropped_responses;
  out->late_responses = r.late_responses;
}

size_t r2p2p_sim_report_peer_count(const r2p2p_sim_report* report) {
  return report == nullptr ? 0 : report->peer_names.size();
}

r2p2p_status r2p2p_sim_report_peer(const r2p2p_sim_report* report, size_t index,
                                   r2p2p_peer_stats* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "report and out are required");
    require(index < report->peer_names.size(), "index out of range");
    const r2p2p::PeerId id{report->peer_names[index]};
    const auto& stats = report->report.peer_stats.at(id);
    out->peer = report->peer_names[index].c_str();
    out->issued_queries = static_cast<int>(
        std::count_if(report->report.runs.begin(), report->report.runs.end(),
                      [&](const r2p2p::QueryRun& run) { return run.query.issuer == id; }));
    out->messages_handled = stats.messages_handled;
    out->relevance_key_calls = stats.relevance_key_calls;
  });
}

r2p2p_status r2p2p_sim_report_format(const r2p2p_sim_report* report, r2p2p_format format,
                                     char** out_text) {
  return guarded([&] {
    require(report != nullptr && out_text != nullptr, "report and out_text are required");
    std::string text;
    std::size_t n = 0;
    for (const auto& run : report->report.runs) {
      text += "# query " + std::to_string(++n) + ' ' + describe(run.query) + '\n';
      text += format == R2P2P_FORMAT_LINES ? r2p2p::format_lines(run.outcome.results)
                                           : r2p2p::format_human(run.outcome.results);
    }
    *out_text = dup_string(text);
  });
}

r2p2p_status r2p2p_sim_report_trace(const r2p2p_sim_report* report, char** out_text) {
  return guarded([&] {
    require(report != nullptr && out_text != nullptr, "report and out_text are required");
    std::string text;
    for (const auto& line : report->report.trace) text += line + '\n';
    *out_text = dup_string(text);
  });
}

void r2p2p_sim_report_free(r2p2p_sim_report* report) { delete report; }

}  // extern "C"
