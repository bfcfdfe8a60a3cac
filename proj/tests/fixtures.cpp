#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "r2p2p/error.hpp"
#include "r2p2p/store.hpp"

namespace fs = std::filesystem;

namespace fixture {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("r2p2p-" + tag + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++) + "-" + std::to_string(rd()));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::vector<std::pair<std::string, std::string>> tree_bytes(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!fs::exists(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    out.emplace_back(fs::relative(entry.path(), root).string(), bytes.str());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<char*> c_argv(const std::vector<std::string>& argv) {
  std::vector<char*> out;
  for (const auto& a : argv) out.push_back(const_cast<char*>(a.c_str()));
  out.push_back(nullptr);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int decode_status(int status) {
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::vector<std::pair<std::string, std::string>>& env) {
  TempDir io("proc");
  const auto out_path = io.path() / "out";
  const auto err_path = io.path() / "err";
  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    const int out = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    const int err = ::open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    const int in = ::open("/dev/null", O_RDONLY);
    ::dup2(out, 1);
    ::dup2(err, 2);
    ::dup2(in, 0);
    for (const auto& [k, v] : env) ::setenv(k.c_str(), v.c_str(), 1);
    auto args = c_argv(argv);
    ::execv(args[0], args.data());
    ::_exit(127);
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  return {decode_status(status), slurp(out_path), slurp(err_path)};
}

BackgroundProcess::BackgroundProcess(const std::vector<std::string>& argv) {
  int fds[2];
  if (::pipe(fds) != 0) throw std::runtime_error("pipe failed");
  pid_ = ::fork();
  if (pid_ < 0) throw std::runtime_error("fork failed");
  if (pid_ == 0) {
    ::dup2(fds[1], 1);
    ::close(fds[0]);
    ::close(fds[1]);
    auto args = c_argv(argv);
    ::execv(args[0], args.data());
    ::_exit(127);
  }
  ::close(fds[1]);
  out_fd_ = fds[0];
}

BackgroundProcess::~BackgroundProcess() {
  stop();
  if (out_fd_ >= 0) ::close(out_fd_);
}

std::string BackgroundProcess::first_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (buffer_.find('\n') == std::string::npos) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return {};
    pollfd p{out_fd_, POLLIN, 0};
    if (::poll(&p, 1, static_cast<int>(left.count())) <= 0) continue;
    char chunk[256];
    const auto n = ::read(out_fd_, chunk, sizeof chunk);
    if (n <= 0) return {};
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
  return buffer_.substr(0, buffer_.find('\n'));
}

int BackgroundProcess::stop() {
  if (pid_ <= 0) return -1;
  ::kill(pid_, SIGTERM);
  int status = 0;
  while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
  }
  pid_ = -1;
  return decode_status(status);
}

r2p2p::CredentialRegistry registry_with(const std::vector<r2p2p::Credential>& creds) {
  r2p2p::CredentialRegistry reg;
  for (const auto& c : creds) reg.grant(c.principal_id, c.role, c.token);
  return reg;
}

const std::vector<AuthCase>& auth_matrix() {
  using r2p2p::Role;
  static const std::vector<AuthCase> cases = {
      {Role::Author, true, true, true},    {Role::Author, false, true, true},
      {Role::Rater, true, true, true},     {Role::Rater, false, true, true},
      {Role::Reader, true, true, false},   {Role::Reader, false, true, false},
      {Role::Author, true, false, true},   {Role::Author, false, false, false},
      {Role::Rater, true, false, true},    {Role::Rater, false, false, true},
      {Role::Reader, true, false, false},  {Role::Reader, false, false, false},
  };
  return cases;
}

std::string describe(const AuthCase& c) {
  return std::string(r2p2p::to_string(c.role)) + (c.owner ? " owner " : " non-owner ") +
         (c.publish ? "publish" : "revise");
}

AuthOutcome run_auth_case(const AuthCase& c) {
  using r2p2p::Role;
  TempDir dir("auth");
  r2p2p::StoreOptions opts;
  opts.node_id = "n1";
  opts.directory = dir.path() / "store";
  // The subject publishes first when it is to own a record; a reader owner
  // is a principal demoted after publishing.
  r2p2p::Credential subject{"subject", "tok-s",
                            c.role == Role::Reader ? Role::Author : c.role};
  const r2p2p::Credential other{"other", "tok-o", Role::Author};
  r2p2p::Store store(opts, registry_with({other, subject}));
  const r2p2p::RatingElement rating{0, r2p2p::Level::A, r2p2p::Descriptor::E};
  const auto target = c.owner ? store.publish("mine", "", "m", rating, subject).id
                              : store.publish("theirs", "", "t", rating, other).id;
  if (c.role == Role::Reader) {
    store.registry().grant("subject", Role::Reader, "tok-s");
    subject.role = Role::Reader;
  }

  const auto disk_before = tree_bytes(dir.path());
  const auto mem_before = store.snapshot();
  AuthOutcome out;
  try {
    const auto adv = c.publish ? store.publish("new", "", "n", rating, subject)
                               : store.revise_rating(target, {5, r2p2p::Level::A,
                                                              r2p2p::Descriptor::E}, subject);
    out.allowed = true;
    out.revision = adv.revision;
  } catch (const r2p2p::Error& e) {
    out.denied_as_unauthorized = e.code() == r2p2p::ErrorCode::Unauthorized;
    out.store_unchanged = tree_bytes(dir.path()) == disk_before && store.snapshot() == mem_before;
  }
  return out;
}

const std::vector<GoldenDoc>& golden_docs() {
  static const std::vector<GoldenDoc> docs = {
      {"alpha", "Basics of Image Processing", 'A', 'E', 40},
      {"alpha", "Image Processing Tutorial for Beginners", 'A', 'F', 15},
      {"alpha", "Image Processing Survey for Undergraduates", 'A', 'G', 5},
      {"alpha", "Digital Image Processing Fundamentals", 'B', 'E', 60},
      {"beta", "Hands-on Image Processing with Filters", 'B', 'F', 25},
      {"beta", "Adaptive Filtering in Image Processing", 'B', 'G', 30},
      {"beta", "Image Processing Primer for Researchers", 'C', 'E', 10},
      {"beta", "Wavelet Methods in Image Processing: A Tutorial", 'C', 'F', 80},
      {"gamma", "Sparse Coding for Image Processing", 'C', 'G', 120},
      {"gamma", "Foundations of Image Analysis Theory", 'D', 'E', 5},
      {"gamma", "Advanced Image Processing Workshop Notes", 'D', 'F', 45},
      {"gamma", "Deep Priors in Image Processing Research", 'D', 'G', 30},
  };
  return docs;
}

Golden make_golden(std::uint64_t seed) {
  Golden g;
  g.net = std::make_unique<r2p2p::SimNetwork>(seed);
  for (const char* name : {"alpha", "beta", "gamma"}) {
    const std::string author = std::string("author@") + name;
    g.net->add_peer(r2p2p::PeerId{name},
                    registry_with({{author, "tok-" + std::string(name), r2p2p::Role::Author}}));
    g.holders.push_back(r2p2p::PeerId{name});
  }
  g.net->add_peer(g.querier, r2p2p::CredentialRegistry{});

  for (const auto& d : golden_docs()) {
    auto& store = g.net->store(r2p2p::PeerId{d.holder});
    r2p2p::RatingElement rating{d.citations, static_cast<r2p2p::Level>(d.level),
                                static_cast<r2p2p::Descriptor>(d.descriptor)};
    store.publish(d.title, "Fixture document " + d.title, "content of " + d.title, rating,
                  {"author@" + d.holder, "tok-" + d.holder, r2p2p::Role::Author});
  }

  auto& gamma = g.net->store(r2p2p::PeerId{"gamma"});
  const std::string cached_id = "urn:r2p2p:gamma-1";
  g.net->store(r2p2p::PeerId{"alpha"}).import_record(gamma.lookup(cached_id));
  gamma.revise_rating(cached_id, {150, r2p2p::Level::C, r2p2p::Descriptor::G},
                      {"author@gamma", "tok-gamma", r2p2p::Role::Author});
  return g;
}

r2p2p::SearchOutcome golden_search(Golden& g) {
  auto transport = g.net->transport_for(g.querier);
  r2p2p::QueryEngine engine(*transport, g.querier.value, 7);
  const std::vector<std::string> keywords = {"image", "processing"};
  r2p2p::UserProfile profile{r2p2p::Level::C, r2p2p::Descriptor::G};
  return g.net->run_as(g.querier, [&] {
    return engine.search(keywords, profile, g.holders, std::chrono::milliseconds(1000));
  });
}

}  // namespace fixture
