#include "r2p2p/config.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "r2p2p/error.hpp"
#include "r2p2p/fileio.hpp"
#include "r2p2p/tcp.hpp"

namespace r2p2p {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

NodeConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  NodeConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::set<std::string, std::less<>> peer_set;
  int lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;

  const auto add_peer = [&](std::string_view p, int at) {
    p = trim(p);
    if (p.empty()) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(at) + ": empty peer entry");
    }
    parse_endpoint(p);
    if (!peer_set.emplace(p).second) {
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(at) + ": duplicate peer '" + std::string(p) + "'");
    }
    cfg.peers.emplace_back(p);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const auto where = "line " + std::to_string(lineno);
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, where + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key != "peer" && !seen.emplace(key).second) {
      throw Error(ErrorCode::ConfigError, where + ": duplicate key '" + std::string(key) + "'");
    }

    if (key == "node_id") {
      cfg.node_id = value;
    } else if (key == "listen") {
      parse_endpoint(value);
      cfg.listen = value;
    } else if (key == "peer") {
      add_peer(value, lineno);
    } else if (key == "peers") {
      std::size_t start = 0;
      while (start <= value.size()) {
        auto comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        add_peer(value.substr(start, comma - start), lineno);
        start = comma + 1;
      }
    } else if (key == "store_dir") {
      cfg.store_dir = base_dir / std::filesystem::path(std::string(value));
    } else if (key == "credentials") {
      cfg.credentials = base_dir / std::filesystem::path(std::string(value));
    } else if (key == "digest") {
      cfg.digest = value;
    } else if (key == "protocol_version") {
      const auto [end, ec] =
          std::from_chars(value.data(), value.data() + value.size(), cfg.protocol_version);
      if (ec != std::errc{} || end != value.data() + value.size()) {
        throw Error(ErrorCode::ConfigError, where + ": protocol_version must be an integer");
      }
    } else {
      throw Error(ErrorCode::ConfigError, where + ": unknown key '" + std::string(key) + "'");
    }
  }

  if (cfg.node_id.empty()) throw Error(ErrorCode::ConfigError, "config lacks node_id");
  if (cfg.store_dir.empty()) throw Error(ErrorCode::ConfigError, "config lacks store_dir");
  if (cfg.credentials.empty()) throw Error(ErrorCode::ConfigError, "config lacks credentials");
  if (!digest_available(cfg.digest)) {
    throw Error(ErrorCode::ConfigError, "unknown digest algorithm '" + cfg.digest + "'");
  }
  return cfg;
}

NodeConfig load_config(const std::filesystem::path& file) {
  std::string text;
  try {
    text = read_file(file);
  } catch (const Error&) {
    throw Error(ErrorCode::ConfigError, "cannot read config file " + file.string());
  }
  return parse_config(text, file.parent_path());
}

}  // namespace r2p2p
