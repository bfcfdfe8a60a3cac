#include "r2p2p/message.hpp"

#include <charconv>
#include <initializer_list>

#include "r2p2p/advert.hpp"
#include "r2p2p/error.hpp"
#include "r2p2p/xml.hpp"

namespace r2p2p {
namespace {

std::string root_name(std::string_view kind) {
  return std::string(kNamespacePrefix) + ":" + std::string(kind);
}

void open_root(std::string& out, std::string_view kind) {
  out += kXmlDeclaration;
  out += '<' + root_name(kind) + " xmlns:" + std::string(kNamespacePrefix) + "=\"" +
         std::string(kNamespaceUri) + "\">";
}

void close_root(std::string& out, std::string_view kind) {
  out += "</" + root_name(kind) + '>';
}

void leaf(std::string& out, std::string_view name, std::string_view text) {
  out += '<';
  out += name;
  out += '>';
  out += xml::escape_text(text);
  out += "</";
  out += name;
  out += '>';
}

const xml::Element& only_child(const xml::Element& parent, std::string_view name) {
  const xml::Element* found = nullptr;
  for (const auto& c : parent.children) {
    if (c.name != name) continue;
    if (found != nullptr) {
      throw Error(ErrorCode::UnexpectedElement, "duplicate <" + std::string(name) + ">");
    }
    found = &c;
  }
  if (found == nullptr) {
    throw Error(ErrorCode::MissingField,
                "<" + parent.name + "> lacks <" + std::string(name) + ">");
  }
  return *found;
}

void expect_children(const xml::Element& e, std::initializer_list<std::string_view> allowed) {
  if (!xml::is_blank(e.text)) {
    throw Error(ErrorCode::UnexpectedElement, "character data inside <" + e.name + ">");
  }
  for (const auto& c : e.children) {
    bool ok = false;
    for (auto a : allowed) ok = ok || c.name == a;
    if (!ok) {
      throw Error(ErrorCode::UnexpectedElement,
                  "unknown element <" + c.name + "> in <" + e.name + ">");
    }
  }
}

const std::string& text_of(const xml::Element& e) {
  if (!e.children.empty() || !e.attributes.empty()) {
    throw Error(ErrorCode::UnexpectedElement, "<" + e.name + "> must hold text only");
  }
  return e.text;
}

std::vector<std::string> list_of(const xml::Element& container, std::string_view item) {
  expect_children(container, {item});
  if (!container.attributes.empty()) {
    throw Error(ErrorCode::UnexpectedElement, "attribute on <" + container.name + ">");
  }
  std::vector<std::string> out;
  for (const auto& c : container.children) out.push_back(text_of(c));
  return out;
}

}  // namespace

std::string_view message_kind(const Message& msg) noexcept {
  switch (msg.index()) {
    case 0: return "QueryRequest";
    case 1: return "QueryResponse";
    default: return "Hello";
  }
}

std::string encode_message(const Message& msg) {
  std::string out;
  const auto kind = message_kind(msg);
  open_root(out, kind);
  if (const auto* req = std::get_if<QueryRequest>(&msg)) {
    leaf(out, "QueryId", req->query_id);
    out += "<Keywords>";
    for (const auto& k : req->keywords) leaf(out, "Keyword", k);
    out += "</Keywords>";
  } else if (const auto* resp = std::get_if<QueryResponse>(&msg)) {
    leaf(out, "QueryId", resp->query_id);
    out += "<Advertisements>";
    for (const auto& a : resp->advertisements) leaf(out, "Advertisement", a);
    out += "</Advertisements>";
  } else {
    const auto& hello = std::get<Hello>(msg);
    leaf(out, "PeerId", hello.peer_id);
    leaf(out, "ProtocolVersion", std::to_string(hello.protocol_version));
  }
  close_root(out, kind);
  return out;
}

Message decode_message(std::string_view text) {
  const auto root = xml::parse(text);
  const auto ns_attr = "xmlns:" + std::string(kNamespacePrefix);
  if (root.attributes.size() != 1 || root.attributes[0].name != ns_attr ||
      root.attributes[0].value != kNamespaceUri) {
    throw Error(ErrorCode::MalformedXml, "message root must bind only the r2p2p namespace");
  }

  if (root.name == root_name("QueryRequest")) {
    expect_children(root, {"QueryId", "Keywords"});
    QueryRequest req;
    req.query_id = text_of(only_child(root, "QueryId"));
    req.keywords = list_of(only_child(root, "Keywords"), "Keyword");
    if (req.query_id.empty()) throw Error(ErrorCode::InvalidField, "empty query id");
    return req;
  }
  if (root.name == root_name("QueryResponse")) {
    expect_children(root, {"QueryId", "Advertisements"});
    QueryResponse resp;
    resp.query_id = text_of(only_child(root, "QueryId"));
    resp.advertisements = list_of(only_child(root, "Advertisements"), "Advertisement");
    if (resp.query_id.empty()) throw Error(ErrorCode::InvalidField, "empty query id");
    return resp;
  }
  if (root.name == root_name("Hello")) {
    expect_children(root, {"PeerId", "ProtocolVersion"});
    Hello hello;
    hello.peer_id = text_of(only_child(root, "PeerId"));
    const auto& v = text_of(only_child(root, "ProtocolVersion"));
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), hello.protocol_version);
    if (ec != std::errc{} || end != v.data() + v.size()) {
      throw Error(ErrorCode::InvalidField, "protocol version '" + v + "' is not an integer");
    }
    return hello;
  }
  throw Error(ErrorCode::UnexpectedElement, "unknown message type <" + root.name + ">");
}

}  // namespace r2p2p
