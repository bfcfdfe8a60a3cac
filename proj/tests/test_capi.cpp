#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <r2p2p/r2p2p.h>

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path root;
  Scratch() {
    root = fs::temp_directory_path() / ("r2p2p-capi-" + std::to_string(std::random_device{}()));
    fs::create_directories(root);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
  fs::path config(const std::string& id, const std::string& extra) const {
    const auto file = root / (id + ".conf");
    std::ofstream(file) << "node_id = " << id << "\nstore_dir = " << id
                        << "-store\ncredentials = " << id << "-creds.txt\n"
                        << extra;
    return file;
  }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  r2p2p_free(s);
  return out;
}

}  // namespace

TEST_CASE("codes through the C boundary") {
  char c = 0;
  CHECK(r2p2p_level_code("B-Tech Student", &c) == R2P2P_OK);
  CHECK(c == 'A');
  CHECK(r2p2p_level_code("Professor", &c) == R2P2P_OK);
  CHECK(c == 'D');
  CHECK(r2p2p_level_code("Postdoc", &c) == R2P2P_ERR_UNKNOWN_ENTITY);
  CHECK(std::string(r2p2p_last_error()).find("Postdoc") != std::string::npos);
  CHECK(r2p2p_descriptor_code("Research paper", &c) == R2P2P_OK);
  CHECK(c == 'G');
  CHECK(r2p2p_descriptor_code("Novel", &c) == R2P2P_ERR_UNKNOWN_DOCTYPE);
  const char* name = nullptr;
  CHECK(r2p2p_decode_level('A', &name) == R2P2P_OK);
  CHECK(std::string(name) == "B-Tech Student");
  CHECK(r2p2p_decode_descriptor('E', &name) == R2P2P_OK);
  CHECK(std::string(name) == "Basics");
  CHECK(r2p2p_decode_level('H', &name) == R2P2P_ERR_INVALID_CODE);
  CHECK(r2p2p_level_code(nullptr, &c) == R2P2P_ERR_USAGE);
  CHECK(std::string(r2p2p_status_name(R2P2P_ERR_INVALID_RATING)) == "InvalidRating");
  CHECK(r2p2p_protocol_version() == 1);
}

TEST_CASE("canonicalize and extract") {
  const char* xml =
      "<r2p2p:DocumentAdvertisement xmlns:r2p2p='urn:r2p2p'> <Rating><Level>C</Level>"
      "<Descriptor>G</Descriptor><Citations>12</Citations></Rating><Id>urn:r2p2p:x</Id>"
      "<Title>T</Title><Summary/><Author>a</Author><ContentHash>00</ContentHash>"
      "<Revision>2</Revision></r2p2p:DocumentAdvertisement>";
  char* out = nullptr;
  REQUIRE(r2p2p_advert_canonicalize(xml, &out) == R2P2P_OK);
  const auto canon = take(out);
  CHECK(canon.rfind("<?xml version=\"1.0\"?>\n", 0) == 0);
  CHECK(canon.find("<Summary></Summary>") != std::string::npos);
  int has = -1;
  r2p2p_rating r{};
  REQUIRE(r2p2p_advert_extract_rating(canon.c_str(), &has, &r) == R2P2P_OK);
  CHECK(has == 1);
  CHECK(r.citations == 12);
  CHECK(r.level == 'C');
  CHECK(r.descriptor == 'G');
  CHECK(r2p2p_advert_canonicalize("<oops", &out) == R2P2P_ERR_MALFORMED_XML);
}

TEST_CASE("node lifecycle, publish, revise, search over TCP") {
  Scratch s;
  r2p2p_node* server_node = nullptr;
  REQUIRE(r2p2p_node_open(s.config("srv", "listen = 127.0.0.1:0\n").c_str(), &server_node) ==
          R2P2P_OK);
  CHECK(std::string(r2p2p_node_id(server_node)) == "srv");
  REQUIRE(r2p2p_node_grant(server_node, "alice", "author", "pw") == R2P2P_OK);
  REQUIRE(r2p2p_node_grant(server_node, "rita", "rater", "rpw") == R2P2P_OK);
  CHECK(r2p2p_node_grant(server_node, "x", "boss", "pw") == R2P2P_ERR_USAGE);

  const r2p2p_rating low{3, 'A', 'E'};
  const r2p2p_rating exact{12, 'C', 'G'};
  const r2p2p_rating bad{1, 'Z', 'G'};
  char* xml = nullptr;
  REQUIRE(r2p2p_node_publish(server_node, "Image Processing Basics", "", "a", 1, &low, "alice",
                             nullptr, "pw", &xml) == R2P2P_OK);
  take(xml);
  REQUIRE(r2p2p_node_publish(server_node, "Image Processing Research", "", "b", 1, &exact, "alice",
                             "author", "pw", &xml) == R2P2P_OK);
  take(xml);
  CHECK(r2p2p_node_publish(server_node, "t", "", "", 0, &bad, "alice", nullptr, "pw", &xml) ==
        R2P2P_ERR_INVALID_RATING);
  CHECK(r2p2p_node_publish(server_node, "t", "", "", 0, &low, "alice", nullptr, "nope", &xml) ==
        R2P2P_ERR_UNAUTHORIZED);
  const r2p2p_rating negative{-1, 'A', 'E'};
  CHECK(r2p2p_node_publish(server_node, "t", "", "", 0, &negative, "alice", nullptr, "pw", &xml) ==
        R2P2P_ERR_INVALID_RATING);
  REQUIRE(r2p2p_node_revise(server_node, "urn:r2p2p:srv-1", &low, "rita", nullptr, "rpw", &xml) ==
          R2P2P_OK);
  CHECK(take(xml).find("<Revision>2</Revision>") != std::string::npos);
  CHECK(r2p2p_node_lookup(server_node, "urn:r2p2p:missing", &xml) == R2P2P_ERR_NOT_FOUND);

  r2p2p_server* server = nullptr;
  REQUIRE(r2p2p_server_start(server_node, &server) == R2P2P_OK);
  const auto port = r2p2p_server_port(server);
  CHECK(port != 0);

  r2p2p_node* client = nullptr;
  REQUIRE(r2p2p_node_open(s.config("cli", "peer = 127.0.0.1:" + std::to_string(port) + "\n").c_str(),
                          &client) == R2P2P_OK);
  char* report = nullptr;
  size_t unreachable = 99;
  REQUIRE(r2p2p_node_check_peers(client, 2000, &report, &unreachable) == R2P2P_OK);
  CHECK(unreachable == 0);
  CHECK(take(report).find("reachable\tsrv") != std::string::npos);

  const char* words[] = {"image", "processing"};
  const r2p2p_profile profile{'C', 'G'};
  r2p2p_results* results = nullptr;
  REQUIRE(r2p2p_node_search(client, words, 2, &profile, 2000, &results) == R2P2P_OK);
  REQUIRE(r2p2p_results_count(results) == 2);
  r2p2p_result_info info{};
  REQUIRE(r2p2p_results_get(results, 0, &info) == R2P2P_OK);
  CHECK(std::string(info.id) == "urn:r2p2p:srv-2");
  CHECK(info.rated == 1);
  CHECK(info.rating.citations == 12);
  CHECK(info.source_count == 1);
  CHECK(r2p2p_results_get(results, 2, &info) == R2P2P_ERR_USAGE);
  char* text = nullptr;
  REQUIRE(r2p2p_results_format(results, R2P2P_FORMAT_LINES, &text) == R2P2P_OK);
  CHECK(take(text).rfind("1\turn:r2p2p:srv-2\t12\tC\tG\tImage Processing Research\n", 0) == 0);
  CHECK(r2p2p_results_skipped(results) == 0);
  r2p2p_results_free(results);

  CHECK(r2p2p_server_messages_handled(server) >= 2);
  CHECK(r2p2p_server_relevance_key_calls(server) == 0);
  r2p2p_server_stop(server);
  r2p2p_node_close(client);
  r2p2p_node_close(server_node);

  // Published records and grants survive reopening.
  REQUIRE(r2p2p_node_open((s.root / "srv.conf").c_str(), &server_node) == R2P2P_OK);
  REQUIRE(r2p2p_node_lookup(server_node, "urn:r2p2p:srv-2", &xml) == R2P2P_OK);
  CHECK(take(xml).find("<Citations>12</Citations>") != std::string::npos);
  r2p2p_node_close(server_node);
}

TEST_CASE("config errors") {
  Scratch s;
  r2p2p_node* node = nullptr;
  CHECK(r2p2p_node_open((s.root / "absent.conf").c_str(), &node) == R2P2P_ERR_CONFIG);
  std::ofstream(s.root / "bad.conf") << "node_id = x\n";
  CHECK(r2p2p_node_open((s.root / "bad.conf").c_str(), &node) == R2P2P_ERR_CONFIG);
  CHECK(r2p2p_node_open(nullptr, &node) == R2P2P_ERR_USAGE);
}

TEST_CASE("simulation report") {
  r2p2p_sim_options opts;
  r2p2p_sim_options_default(&opts);
  opts.queries = 10;
  opts.drop_probability = 0.2;
  opts.corrupt_probability = 0.05;
  r2p2p_sim_report* report = nullptr;
  REQUIRE(r2p2p_simulate(&opts, &report) == R2P2P_OK);
  r2p2p_sim_totals totals{};
  r2p2p_sim_report_totals(report, &totals);
  CHECK(totals.queries == 10);
  CHECK(totals.skipped_payloads == totals.delivered_corruptions);
  CHECK(r2p2p_sim_report_peer_count(report) == opts.peers);
  for (size_t i = 0; i < r2p2p_sim_report_peer_count(report); ++i) {
    r2p2p_peer_stats st{};
    REQUIRE(r2p2p_sim_report_peer(report, i, &st) == R2P2P_OK);
    if (st.issued_queries == 0) CHECK(st.relevance_key_calls == 0);
  }
  char* lines = nullptr;
  REQUIRE(r2p2p_sim_report_format(report, R2P2P_FORMAT_LINES, &lines) == R2P2P_OK);
  CHECK(take(lines).rfind("# query 1 ", 0) == 0);
  char* trace = nullptr;
  REQUIRE(r2p2p_sim_report_trace(report, &trace) == R2P2P_OK);
  CHECK_FALSE(take(trace).empty());
  r2p2p_sim_report_free(report);

  opts.drop_probability = 1.5;
  CHECK(r2p2p_simulate(&opts, &report) == R2P2P_ERR_USAGE);
}
