#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "r2p2p/digest.hpp"
#include "r2p2p/message.hpp"

namespace r2p2p {

// Node configuration, read from a line-based file:
//
//   # comment
//   node_id = alpha
//   listen = 127.0.0.1:7401
//   peers = 127.0.0.1:7402, 127.0.0.1:7403
//   peer = 127.0.0.1:7404            (repeatable, appends)
//   store_dir = alpha-store
//   credentials = alpha-credentials.txt
//   digest = sha256
//   protocol_version = 1
//
// Relative paths resolve against the directory holding the file.
struct NodeConfig {
  std::string node_id;
  std::string listen;
  std::vector<std::string> peers;
  std::filesystem::path store_dir;
  std::filesystem::path credentials;
  std::string digest = std::string(kDefaultDigest);
  int protocol_version = kProtocolVersion;
};

NodeConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
NodeConfig load_config(const std::filesystem::path& file);

}  // namespace r2p2p
