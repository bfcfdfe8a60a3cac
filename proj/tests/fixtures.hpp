#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "r2p2p/credentials.hpp"
#include "r2p2p/queryengine.hpp"
#include "r2p2p/sim.hpp"

namespace fixture {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

// Every file under `root` with its bytes, keyed by relative path.
std::vector<std::pair<std::string, std::string>> tree_bytes(const std::filesystem::path& root);

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal
  std::string out;
  std::string err;
};

// Runs argv[0] with the given arguments and waits for it.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::vector<std::pair<std::string, std::string>>& env = {});

// A child process running in the background, stopped with SIGTERM on
// destruction. Its first stdout line is available once it prints it.
class BackgroundProcess {
 public:
  explicit BackgroundProcess(const std::vector<std::string>& argv);
  ~BackgroundProcess();
  BackgroundProcess(const BackgroundProcess&) = delete;
  BackgroundProcess& operator=(const BackgroundProcess&) = delete;

  // Empty when nothing arrives before the timeout.
  std::string first_line(std::chrono::milliseconds timeout);
  int stop();

 private:
  int pid_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
};

r2p2p::CredentialRegistry registry_with(const std::vector<r2p2p::Credential>& creds);

// One cell of the role x ownership x operation matrix, run against a fresh
// persistent store.
struct AuthCase {
  r2p2p::Role role;
  bool owner;
  bool publish;  // else revise
  bool expect_allowed;
};

const std::vector<AuthCase>& auth_matrix();

struct AuthOutcome {
  bool allowed = false;
  bool denied_as_unauthorized = false;
  bool store_unchanged = false;  // memory and disk, checked on denial
  std::uint64_t revision = 0;    // after an allowed call
};

AuthOutcome run_auth_case(const AuthCase& c);

std::string describe(const AuthCase& c);

struct GoldenDoc {
  std::string holder;
  std::string title;
  char level;
  char descriptor;
  std::uint64_t citations;
};

// Twelve documents on alpha, beta and gamma, one per level/descriptor pair.
// gamma's C/G paper is also cached on alpha one revision behind.
const std::vector<GoldenDoc>& golden_docs();

struct Golden {
  std::unique_ptr<r2p2p::SimNetwork> net;
  std::vector<r2p2p::PeerId> holders;
  r2p2p::PeerId querier{"client"};
};

Golden make_golden(std::uint64_t seed);

// Searches "image processing" with profile {C, G} from the client.
r2p2p::SearchOutcome golden_search(Golden& g);

inline constexpr const char* kGoldenFile = "image_processing_CG.lines";

}  // namespace fixture
