#pragma once

// TCP mode: one message per frame, each frame a 4-byte big-endian length
// followed by that many bytes of UTF-8 message XML. A session opens with a
// Hello exchange; any protocol version mismatch closes the connection.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include "r2p2p/message.hpp"
#include "r2p2p/network.hpp"

namespace r2p2p {

inline constexpr std::size_t kMaxFrameBytes = 16u << 20;

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  std::string to_string() const;
};

/// "host:port"; throws ConfigError.
Endpoint parse_endpoint(std::string_view text);

std::string encode_frame(std::string_view payload);

/// Incremental frame splitter for a byte stream.
class FrameDecoder {
 public:
  /// Appends bytes; throws ProtocolError for a frame over kMaxFrameBytes.
  void feed(std::string_view bytes);
  std::optional<std::string> next();

 private:
  std::string buffer_;
};

using Clock = std::chrono::steady_clock;

/// A connected, blocking-with-deadline socket.
class Connection {
 public:
  static Connection dial(const Endpoint& to, Clock::time_point deadline);
  explicit Connection(int fd) noexcept : fd_(fd) {}
  ~Connection();
  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  void send(const Message& msg, Clock::time_point deadline);
  /// Empty when the peer closed the connection cleanly between frames.
  std::optional<Message> receive(Clock::time_point deadline);

 private:
  int fd_ = -1;
  FrameDecoder decoder_;
};

/// Serves the local store to remote peers until stopped.
class TcpServer {
 public:
  TcpServer(const Store& store, std::string peer_id, const Endpoint& listen);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  void stop();
  PeerStats stats() const noexcept { return snapshot(counters_); }

 private:
  void accept_loop();
  void serve_connection(int fd);

  const Store& store_;
  std::string peer_id_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  PeerCounters counters_;
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };
  std::mutex workers_mutex_;
  std::list<Worker> workers_;
  std::thread acceptor_;
};

/// Queries remote peers over TCP. PeerIds are "host:port" addresses.
class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(std::string local_peer_id);

  std::vector<PeerResponse> broadcast_query(const QueryRequest& req,
                                            std::span<const PeerId> peers,
                                            std::chrono::milliseconds timeout) override;

  /// Hello handshake; returns the remote Hello. Throws TransportError or
  /// ProtocolError.
  Hello hello(const PeerId& peer, std::chrono::milliseconds timeout, int version = kProtocolVersion);

 private:
  std::string local_peer_id_;
};

}  // namespace r2p2p
