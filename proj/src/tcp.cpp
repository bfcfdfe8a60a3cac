#include "r2p2p/tcp.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <memory>
#include <stdexcept>

#include "r2p2p/error.hpp"
#include "r2p2p/relevance.hpp"

namespace r2p2p {
namespace {

constexpr auto kIdleTimeout = std::chrono::seconds(30);
constexpr auto kFrameTimeout = std::chrono::seconds(5);
constexpr int kPollSliceMs = 100;

[[noreturn]] void transport_error(const std::string& what) {
  throw Error(ErrorCode::TransportError, what);
}

void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  if (flags < 0 || ::fcntl(fd, F_SETFL, flags | O_NONBLOCK) < 0) {
    transport_error(std::string("fcntl: ") + std::strerror(errno));
  }
}

int remaining_ms(Clock::time_point deadline) {
  const auto left =
      std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left <= 0 ? 0 : static_cast<int>(std::min<long long>(left, 1 << 30));
}

// Waits for `events` on fd; false on deadline.
bool wait_for(int fd, short events, Clock::time_point deadline) {
  for (;;) {
    pollfd p{fd, events, 0};
    const int ms = remaining_ms(deadline);
    const int rc = ::poll(&p, 1, ms);
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) transport_error(std::string("poll: ") + std::strerror(errno));
  }
}

struct AddrInfoDeleter {
  void operator()(addrinfo* a) const noexcept { ::freeaddrinfo(a); }
};

std::unique_ptr<addrinfo, AddrInfoDeleter> resolve(const Endpoint& ep, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const auto port = std::to_string(ep.port);
  const int rc = ::getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(),
                               &hints, &res);
  if (rc != 0) transport_error("cannot resolve " + ep.to_string() + ": " + ::gai_strerror(rc));
  return std::unique_ptr<addrinfo, AddrInfoDeleter>(res);
}

}  // namespace

std::string Endpoint::to_string() const {
  const bool v6 = host.find(':') != std::string::npos;
  return (v6 ? "[" + host + "]" : host) + ":" + std::to_string(port);
}

Endpoint parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon + 1 == text.size()) {
    throw Error(ErrorCode::ConfigError, "address '" + std::string(text) + "' is not host:port");
  }
  Endpoint ep;
  auto host = text.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  if (host.empty()) {
    throw Error(ErrorCode::ConfigError, "address '" + std::string(text) + "' has no host");
  }
  ep.host = std::string(host);
  const auto port = text.substr(colon + 1);
  unsigned value = 0;
  const auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (ec != std::errc{} || end != port.data() + port.size() || value > 65535) {
    throw Error(ErrorCode::ConfigError, "bad port in address '" + std::string(text) + "'");
  }
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

std::string encode_frame(std::string_view payload) {
  if (payload.size() > kMaxFrameBytes) {
    throw Error(ErrorCode::ProtocolError, "message exceeds the frame size limit");
  }
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string frame;
  frame.reserve(4 + payload.size());
  frame.push_back(static_cast<char>((n >> 24) & 0xFF));
  frame.push_back(static_cast<char>((n >> 16) & 0xFF));
  frame.push_back(static_cast<char>((n >> 8) & 0xFF));
  frame.push_back(static_cast<char>(n & 0xFF));
  frame.append(payload);
  return frame;
}

void FrameDecoder::feed(std::string_view bytes) { buffer_.append(bytes); }

std::optional<std::string> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  const auto b = [&](std::size_t i) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(buffer_[i]));
  };
  const std::uint32_t n = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
  if (n > kMaxFrameBytes) {
    throw Error(ErrorCode::ProtocolError, "incoming frame exceeds the size limit");
  }
  if (buffer_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
  std::string payload = buffer_.substr(4, n);
  buffer_.erase(0, 4 + static_cast<std::size_t>(n));
  return payload;
}

Connection Connection::dial(const Endpoint& to, Clock::time_point deadline) {
  auto addrs = resolve(to, false);
  std::string last_error = "no addresses";
  for (auto* a = addrs.get(); a != nullptr; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    Connection conn(fd);
    set_nonblocking(fd);
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) return conn;
    if (errno != EINPROGRESS) {
      last_error = std::strerror(errno);
      continue;
    }
    if (!wait_for(fd, POLLOUT, deadline)) {
      last_error = "connect timed out";
      continue;
    }
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
    if (err == 0) return conn;
    last_error = std::strerror(err);
  }
  transport_error("cannot connect to " + to.to_string() + ": " + last_error);
}

Connection::~Connection() {
  if (fd_ >= 0) ::close(fd_);
}

Connection::Connection(Connection&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), decoder_(std::move(other.decoder_)) {}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    decoder_ = std::move(other.decoder_);
  }
  return *this;
}

void Connection::send(const Message& msg, Clock::time_point deadline) {
  const auto frame = encode_frame(encode_message(msg));
  std::size_t sent = 0;
  while (sent < frame.size()) {
    const auto n = ::send(fd_, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
    if (n > 0) {
      sent += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      if (!wait_for(fd_, POLLOUT, deadline)) transport_error("send timed out");
      continue;
    }
    transport_error(std::string("send: ") + std::strerror(errno));
  }
}

std::optional<Message> Connection::receive(Clock::time_point deadline) {
  bool partial = false;
  for (;;) {
    if (auto payload = decoder_.next()) return decode_message(*payload);
    char buf[16384];
    const auto n = ::recv(fd_, buf, sizeof(buf), 0);
    if (n > 0) {
      decoder_.feed(std::string_view(buf, static_cast<std::size_t>(n)));
      partial = true;
      continue;
    }
    if (n == 0) {
      if (partial) transport_error("connection closed mid-frame");
      return std::nullopt;
    }
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      if (!wait_for(fd_, POLLIN, deadline)) transport_error("receive timed out");
      continue;
    }
    transport_error(std::string("recv: ") + std::strerror(errno));
  }
}

TcpServer::TcpServer(const Store& store, std::string peer_id, const Endpoint& listen)
    : store_(store), peer_id_(std::move(peer_id)) {
  auto addrs = resolve(listen, true);
  std::string last_error = "no addresses";
  for (auto* a = addrs.get(); a != nullptr; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  if (listen_fd_ < 0) transport_error("cannot listen on " + listen.to_string() + ": " + last_error);
  set_nonblocking(listen_fd_);

  sockaddr_storage bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = bound.ss_family == AF_INET6
              ? ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port)
              : ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);

  acceptor_ = std::thread([this] { accept_loop(); });
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::stop() {
  if (stopping_.exchange(true)) return;
  if (acceptor_.joinable()) acceptor_.join();
  std::lock_guard lock(workers_mutex_);
  for (auto& w : workers_) {
    if (w.thread.joinable()) w.thread.join();
  }
  workers_.clear();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
}

void TcpServer::accept_loop() {
  while (!stopping_.load()) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, kPollSliceMs);
    if (rc <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard lock(workers_mutex_);
    std::erase_if(workers_, [](Worker& w) {
      if (!w.done->load()) return false;
      w.thread.join();
      return true;
    });
    auto done = std::make_shared<std::atomic<bool>>(false);
    workers_.push_back({std::thread([this, fd, done] {
                          serve_connection(fd);
                          done->store(true);
                        }),
                        done});
  }
}

void TcpServer::serve_connection(int fd) {
  KeyCounterScope scope(counters_.relevance_key_calls);
  Connection conn(fd);
  try {
    set_nonblocking(fd);
    auto idle_deadline = Clock::now() + kIdleTimeout;
    bool greeted = false;
    while (!stopping_.load()) {
      if (!wait_for(fd, POLLIN, std::min(idle_deadline, Clock::now() +
                                                            std::chrono::milliseconds(kPollSliceMs)))) {
        if (Clock::now() >= idle_deadline) return;
        continue;
      }
      auto msg = conn.receive(Clock::now() + kFrameTimeout);
      if (!msg) return;
      if (!greeted && !std::holds_alternative<Hello>(*msg)) return;
      greeted = true;
      counters_.messages_handled.fetch_add(1);
      auto reply = handle_message(*msg, store_, peer_id_);
      if (reply) conn.send(*reply, Clock::now() + kFrameTimeout);
      idle_deadline = Clock::now() + kIdleTimeout;
    }
  } catch (const std::exception&) {
    // Protocol violations and transport failures end this session only.
  }
}

TcpTransport::TcpTransport(std::string local_peer_id) : local_peer_id_(std::move(local_peer_id)) {}

Hello TcpTransport::hello(const PeerId& peer, std::chrono::milliseconds timeout, int version) {
  const auto deadline = Clock::now() + timeout;
  auto conn = Connection::dial(parse_endpoint(peer.value), deadline);
  conn.send(Hello{local_peer_id_, version}, deadline);
  auto reply = conn.receive(deadline);
  if (!reply) {
    throw Error(ErrorCode::ProtocolError, peer.value + " closed the session during the handshake");
  }
  const auto* h = std::get_if<Hello>(&*reply);
  if (h == nullptr) throw Error(ErrorCode::ProtocolError, peer.value + " did not answer Hello");
  if (h->protocol_version != kProtocolVersion) {
    throw Error(ErrorCode::ProtocolError, peer.value + " speaks protocol version " +
                                              std::to_string(h->protocol_version));
  }
  return *h;
}

std::vector<PeerResponse> TcpTransport::broadcast_query(const QueryRequest& req,
                                                        std::span<const PeerId> peers,
                                                        std::chrono::milliseconds timeout) {
  if (timeout.count() <= 0) throw std::invalid_argument("broadcast timeout must be positive");
  const auto deadline = Clock::now() + timeout;
  std::mutex mutex;
  std::vector<PeerResponse> collected;
  std::vector<std::thread> workers;
  workers.reserve(peers.size());
  for (const auto& peer : peers) {
    workers.emplace_back([&, peer] {
      try {
        auto conn = Connection::dial(parse_endpoint(peer.value), deadline);
        conn.send(Hello{local_peer_id_, kProtocolVersion}, deadline);
        auto hello = conn.receive(deadline);
        if (!hello || !std::holds_alternative<Hello>(*hello)) return;
        conn.send(req, deadline);
        auto reply = conn.receive(deadline);
        if (!reply) return;
        if (auto* resp = std::get_if<QueryResponse>(&*reply)) {
          std::lock_guard lock(mutex);
          collected.push_back({peer, std::move(*resp)});
        }
      } catch (const std::exception&) {
        // An unreachable or misbehaving peer only reduces recall.
      }
    });
  }
  for (auto& w : workers) w.join();
  return collected;
}

}  // namespace r2p2p
