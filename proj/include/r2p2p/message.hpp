#pragma once

// Wire envelope exchanged between peers. Each message is one XML document
// whose root is r2p2p:QueryRequest, r2p2p:QueryResponse or r2p2p:Hello.
// Advertisements travel inside a QueryResponse as escaped character data so
// a damaged advertisement never breaks the envelope around it.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace r2p2p {

inline constexpr int kProtocolVersion = 1;

struct QueryRequest {
  std::string query_id;
  std::vector<std::string> keywords;

  friend bool operator==(const QueryRequest&, const QueryRequest&) = default;
};

struct QueryResponse {
  std::string query_id;
  std::vector<std::string> advertisements;

  friend bool operator==(const QueryResponse&, const QueryResponse&) = default;
};

struct Hello {
  std::string peer_id;
  int protocol_version = kProtocolVersion;

  friend bool operator==(const Hello&, const Hello&) = default;
};

using Message = std::variant<QueryRequest, QueryResponse, Hello>;

std::string_view message_kind(const Message& msg) noexcept;

std::string encode_message(const Message& msg);

/// Errors: MalformedXml, UnexpectedElement, MissingField, InvalidField.
Message decode_message(std::string_view xml);

}  // namespace r2p2p
