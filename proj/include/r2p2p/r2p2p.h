/*
 * r2p2p: rated-resource peer-to-peer node, C interface.
 *
 * Every object crosses this boundary as an opaque handle. Calls return an
 * r2p2p_status; on failure r2p2p_last_error() describes the problem for the
 * calling thread until its next failing call. Strings handed out through
 * `char**` parameters are owned by the caller and released with r2p2p_free.
 * `const char*` results are owned by the handle they came from.
 */
#ifndef R2P2P_H
#define R2P2P_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(R2P2P_BUILDING_LIBRARY)
#    define R2P2P_API __declspec(dllexport)
#  else
#    define R2P2P_API __declspec(dllimport)
#  endif
#else
#  define R2P2P_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum r2p2p_status {
  R2P2P_OK = 0,
  R2P2P_ERR_USAGE,
  R2P2P_ERR_CONFIG,
  R2P2P_ERR_UNAUTHORIZED,
  R2P2P_ERR_INVALID_RATING,
  R2P2P_ERR_INVALID_CODE,
  R2P2P_ERR_INVALID_CITATIONS,
  R2P2P_ERR_MALFORMED_XML,
  R2P2P_ERR_MISSING_FIELD,
  R2P2P_ERR_UNEXPECTED_ELEMENT,
  R2P2P_ERR_INVALID_FIELD,
  R2P2P_ERR_UNKNOWN_ENTITY,
  R2P2P_ERR_UNKNOWN_DOCTYPE,
  R2P2P_ERR_NOT_FOUND,
  R2P2P_ERR_PROTOCOL,
  R2P2P_ERR_TRANSPORT,
  R2P2P_ERR_IO,
  R2P2P_ERR_INTEGRITY,
  R2P2P_ERR_INTERNAL
} r2p2p_status;

typedef enum r2p2p_format {
  R2P2P_FORMAT_HUMAN = 0,
  /* rank \t id \t citations \t level \t descriptor \t title */
  R2P2P_FORMAT_LINES = 1
} r2p2p_format;

R2P2P_API const char* r2p2p_status_name(r2p2p_status status);
R2P2P_API const char* r2p2p_last_error(void);
R2P2P_API void r2p2p_free(void* p);
R2P2P_API int r2p2p_protocol_version(void);

/* Level codes 'A'..'D', descriptor codes 'E'..'G'. Citations must be >= 0. */
typedef struct r2p2p_rating {
  int64_t citations;
  char level;
  char descriptor;
} r2p2p_rating;

/* desired_descriptor == 0 means no document-type preference. */
typedef struct r2p2p_profile {
  char level;
  char desired_descriptor;
} r2p2p_profile;

/* ---- advertisements and codes ------------------------------------------ */

/* Parses an advertisement and writes its canonical serialization. */
R2P2P_API r2p2p_status r2p2p_advert_canonicalize(const char* xml, char** out_xml);

/* *has_rating is set to 0 when the advertisement carries no rating. */
R2P2P_API r2p2p_status r2p2p_advert_extract_rating(const char* xml, int* has_rating,
                                                   r2p2p_rating* out);

R2P2P_API r2p2p_status r2p2p_level_code(const char* entity_name, char* out_code);
R2P2P_API r2p2p_status r2p2p_descriptor_code(const char* doc_type_name, char* out_code);
R2P2P_API r2p2p_status r2p2p_decode_level(char code, const char** out_name);
R2P2P_API r2p2p_status r2p2p_decode_descriptor(char code, const char** out_name);

/* ---- nodes --------------------------------------------------------------- */

typedef struct r2p2p_node r2p2p_node;

R2P2P_API r2p2p_status r2p2p_node_open(const char* config_path, r2p2p_node** out);
R2P2P_API void r2p2p_node_close(r2p2p_node* node);
R2P2P_API const char* r2p2p_node_id(const r2p2p_node* node);

/* role: "author", "rater" or "reader". Rewrites the credential file. */
R2P2P_API r2p2p_status r2p2p_node_grant(r2p2p_node* node, const char* principal,
                                        const char* role, const char* token);

/*
 * `role` may be NULL to claim the role registered for `principal`.
 * `rating` may be NULL to publish an unrated document.
 * On success *out_xml receives the canonical advertisement.
 */
R2P2P_API r2p2p_status r2p2p_node_publish(r2p2p_node* node, const char* title,
                                          const char* summary, const void* content,
                                          size_t content_len, const r2p2p_rating* rating,
                                          const char* principal, const char* role,
                                          const char* token, char** out_xml);

R2P2P_API r2p2p_status r2p2p_node_revise(r2p2p_node* node, const char* adv_id,
                                         const r2p2p_rating* rating, const char* principal,
                                         const char* role, const char* token, char** out_xml);

R2P2P_API r2p2p_status r2p2p_node_lookup(r2p2p_node* node, const char* adv_id,
                                         char** out_xml);

/*
 * Hello handshake with every configured peer. *out_report gets one line per
 * peer: address \t "reachable" \t remote id, or address \t "unreachable" \t
 * reason. *out_unreachable counts the failures.
 */
R2P2P_API r2p2p_status r2p2p_node_check_peers(r2p2p_node* node, int timeout_ms,
                                              char** out_report, size_t* out_unreachable);

/* ---- searching ----------------------------------------------------------- */

typedef struct r2p2p_results r2p2p_results;

typedef struct r2p2p_result_info {
  const char* id;
  const char* title;
  const char* author;
  uint64_t revision;
  int rated;
  r2p2p_rating rating;
  size_t source_count;
} r2p2p_result_info;

R2P2P_API r2p2p_status r2p2p_node_search(r2p2p_node* node, const char* const* keywords,
                                         size_t keyword_count, const r2p2p_profile* profile,
                                         int timeout_ms, r2p2p_results** out);
R2P2P_API size_t r2p2p_results_count(const r2p2p_results* results);
R2P2P_API r2p2p_status r2p2p_results_get(const r2p2p_results* results, size_t index,
                                         r2p2p_result_info* out);
R2P2P_API size_t r2p2p_results_skipped(const r2p2p_results* results);
R2P2P_API size_t r2p2p_results_conflicts(const r2p2p_results* results);
R2P2P_API r2p2p_status r2p2p_results_format(const r2p2p_results* results, r2p2p_format format,
                                            char** out_text);
R2P2P_API void r2p2p_results_free(r2p2p_results* results);

/* ---- serving ------------------------------------------------------------- */

typedef struct r2p2p_server r2p2p_server;

/* Binds the node's listen address; the node must outlive the server. */
R2P2P_API r2p2p_status r2p2p_server_start(r2p2p_node* node, r2p2p_server** out);
R2P2P_API uint16_t r2p2p_server_port(const r2p2p_server* server);
R2P2P_API uint64_t r2p2p_server_messages_handled(const r2p2p_server* server);
R2P2P_API uint64_t r2p2p_server_relevance_key_calls(const r2p2p_server* server);
/* Stops serving and releases the handle. */
R2P2P_API void r2p2p_server_stop(r2p2p_server* server);

/* ---- simulation ---------------------------------------------------------- */

typedef struct r2p2p_sim_options {
  uint64_t seed;
  size_t peers;
  size_t documents;
  size_t queries;
  double drop_probability;
  double corrupt_probability;
  uint32_t min_delay_ms;
  uint32_t max_delay_ms;
  int timeout_ms;
  const r2p2p_profile* profile;   /* NULL: per-query generated profiles */
  const char* const* keywords;    /* NULL: per-query generated keywords */
  size_t keyword_count;
  size_t issuers;                 /* 0: any peer may issue queries */
} r2p2p_sim_options;

typedef struct r2p2p_sim_totals {
  size_t queries;
  size_t results;
  uint64_t skipped_payloads;
  uint64_t delivered_corruptions;
  uint64_t dropped_responses;
  uint64_t late_responses;
  uint64_t conflicts;
} r2p2p_sim_totals;

typedef struct r2p2p_peer_stats {
  const char* peer;
  int issued_queries;
  uint64_t messages_handled;
  uint64_t relevance_key_calls;
} r2p2p_peer_stats;

typedef struct r2p2p_sim_report r2p2p_sim_report;

R2P2P_API void r2p2p_sim_options_default(r2p2p_sim_options* options);
R2P2P_API r2p2p_status r2p2p_simulate(const r2p2p_sim_options* options,
                                      r2p2p_sim_report** out);
R2P2P_API void r2p2p_sim_report_totals(const r2p2p_sim_report* report, r2p2p_sim_totals* out);
R2P2P_API size_t r2p2p_sim_report_peer_count(const r2p2p_sim_report* report);
R2P2P_API r2p2p_status r2p2p_sim_report_peer(const r2p2p_sim_report* report, size_t index,
                                             r2p2p_peer_stats* out);
/* Per query: a "# query ..." header line, then that query's results. */
R2P2P_API r2p2p_status r2p2p_sim_report_format(const r2p2p_sim_report* report,
                                               r2p2p_format format, char** out_text);
R2P2P_API r2p2p_status r2p2p_sim_report_trace(const r2p2p_sim_report* report,
                                              char** out_text);
R2P2P_API void r2p2p_sim_report_free(r2p2p_sim_report* report);

#ifdef __cplusplus
}
#endif

#endif /* R2P2P_H */
