#include "r2p2p/xml.hpp"

#include <cstdint>

#include "r2p2p/error.hpp"

namespace r2p2p::xml {
namespace {

constexpr std::size_t kMaxDepth = 256;

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

bool is_name_start(unsigned char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
         c == ':' || c >= 0x80;
}

bool is_name_char(unsigned char c) noexcept {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_xml_char(std::uint32_t cp) noexcept {
  return cp == 0x9 || cp == 0xA || cp == 0xD || (cp >= 0x20 && cp <= 0xD7FF) ||
         (cp >= 0xE000 && cp <= 0xFFFD) || (cp >= 0x10000 && cp <= 0x10FFFF);
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Validates UTF-8 and the XML Char production over the raw document.
void check_encoding(std::string_view doc) {
  std::size_t i = 0;
  while (i < doc.size()) {
    const auto c = static_cast<unsigned char>(doc[i]);
    std::uint32_t cp = 0;
    std::size_t len = 0;
    if (c < 0x80) {
      cp = c;
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      len = 4;
    } else {
      throw Error(ErrorCode::MalformedXml, "invalid UTF-8 lead byte");
    }
    if (i + len > doc.size()) {
      throw Error(ErrorCode::MalformedXml, "truncated UTF-8 sequence");
    }
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(doc[i + k]);
      if ((cc & 0xC0) != 0x80) {
        throw Error(ErrorCode::MalformedXml, "invalid UTF-8 continuation");
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    static constexpr std::uint32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLen[len]) {
      throw Error(ErrorCode::MalformedXml, "overlong UTF-8 sequence");
    }
    if (!is_xml_char(cp)) {
      throw Error(ErrorCode::MalformedXml, "character not allowed in XML");
    }
    i += len;
  }
}

}  // namespace

Reader::Reader(std::string_view document) : doc_(document) {
  check_encoding(doc_);
  if (starts_with("\xEF\xBB\xBF")) pos_ = 3;
  if (starts_with("<?xml") && pos_ + 5 < doc_.size() &&
      is_space(doc_[pos_ + 5])) {
    const auto end = doc_.find("?>", pos_);
    if (end == std::string_view::npos) fail("unterminated XML declaration");
    const auto decl = doc_.substr(pos_, end - pos_);
    if (decl.find("version") == std::string_view::npos) {
      fail("XML declaration without version");
    }
    pos_ = end + 2;
  }
}

bool Reader::starts_with(std::string_view s) const noexcept {
  return doc_.substr(pos_).starts_with(s);
}

void Reader::fail(std::string_view why) const {
  throw Error(ErrorCode::MalformedXml,
              std::string(why) + " at offset " + std::to_string(pos_));
}

void Reader::skip_space() {
  while (pos_ < doc_.size() && is_space(doc_[pos_])) ++pos_;
}

void Reader::skip_comment() {
  // positioned at "<!--"
  const auto end = doc_.find("--", pos_ + 4);
  if (end == std::string_view::npos) fail("unterminated comment");
  if (end + 2 >= doc_.size() || doc_[end + 2] != '>') {
    fail("'--' inside comment");
  }
  pos_ = end + 3;
}

void Reader::skip_processing_instruction() {
  // positioned at "<?"
  pos_ += 2;
  const auto target = read_name();
  if (target.size() == 3 && (target[0] == 'x' || target[0] == 'X') &&
      (target[1] == 'm' || target[1] == 'M') &&
      (target[2] == 'l' || target[2] == 'L')) {
    fail("misplaced XML declaration");
  }
  const auto end = doc_.find("?>", pos_);
  if (end == std::string_view::npos) fail("unterminated processing instruction");
  pos_ = end + 2;
}

// Whitespace, comments and PIs outside the document element.
void Reader::skip_misc() {
  for (;;) {
    skip_space();
    if (starts_with("<!--")) {
      skip_comment();
    } else if (starts_with("<?")) {
      skip_processing_instruction();
    } else {
      return;
    }
  }
}

std::string Reader::read_name() {
  const auto begin = pos_;
  if (pos_ >= doc_.size() ||
      !is_name_start(static_cast<unsigned char>(doc_[pos_]))) {
    fail("expected a name");
  }
  ++pos_;
  while (pos_ < doc_.size() &&
         is_name_char(static_cast<unsigned char>(doc_[pos_]))) {
    ++pos_;
  }
  return std::string(doc_.substr(begin, pos_ - begin));
}

// Positioned at '&'; returns the decoded replacement text.
std::string Reader::read_reference() {
  const auto end = doc_.find(';', pos_);
  if (end == std::string_view::npos || end - pos_ > 12) {
    fail("unterminated entity reference");
  }
  const auto body = doc_.substr(pos_ + 1, end - pos_ - 1);
  pos_ = end + 1;
  if (body == "amp") return "&";
  if (body == "lt") return "<";
  if (body == "gt") return ">";
  if (body == "quot") return "\"";
  if (body == "apos") return "'";
  if (body.size() >= 2 && body[0] == '#') {
    const bool hex = body[1] == 'x';
    const auto digits = body.substr(hex ? 2 : 1);
    if (digits.empty()) fail("empty character reference");
    std::uint32_t cp = 0;
    for (char d : digits) {
      std::uint32_t v = 0;
      if (d >= '0' && d <= '9') {
        v = static_cast<std::uint32_t>(d - '0');
      } else if (hex && d >= 'a' && d <= 'f') {
        v = static_cast<std::uint32_t>(d - 'a' + 10);
      } else if (hex && d >= 'A' && d <= 'F') {
        v = static_cast<std::uint32_t>(d - 'A' + 10);
      } else {
        fail("bad digit in character reference");
      }
      cp = cp * (hex ? 16 : 10) + v;
      if (cp > 0x10FFFF) fail("character reference out of range");
    }
    if (!is_xml_char(cp)) fail("character reference to a non-XML character");
    std::string out;
    append_utf8(out, cp);
    return out;
  }
  fail("unknown entity");
}

std::string Reader::read_attribute_value() {
  if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\'')) {
    fail("expected quoted attribute value");
  }
  const char quote = doc_[pos_++];
  std::string value;
  for (;;) {
    if (pos_ >= doc_.size()) fail("unterminated attribute value");
    const char c = doc_[pos_];
    if (c == quote) {
      ++pos_;
      return value;
    }
    if (c == '<') fail("'<' in attribute value");
    if (c == '&') {
      value += read_reference();
      continue;
    }
    if (c == '\r' && pos_ + 1 < doc_.size() && doc_[pos_ + 1] == '\n') ++pos_;
    value.push_back(is_space(c) ? ' ' : c);
    ++pos_;
  }
}

Event Reader::read_start_tag() {
  ++pos_;  // '<'
  Event ev;
  ev.kind = EventKind::StartElement;
  ev.name = read_name();
  for (;;) {
    const auto before = pos_;
    skip_space();
    if (pos_ >= doc_.size()) fail("unterminated start tag");
    if (doc_[pos_] == '>') {
      ++pos_;
      break;
    }
    if (starts_with("/>")) {
      pos_ += 2;
      pending_end_ = ev.name;
      break;
    }
    if (before == pos_) fail("expected whitespace before attribute");
    Attribute attr;
    attr.name = read_name();
    skip_space();
    if (pos_ >= doc_.size() || doc_[pos_] != '=') fail("expected '='");
    ++pos_;
    skip_space();
    attr.value = read_attribute_value();
    for (const auto& existing : ev.attributes) {
      if (existing.name == attr.name) fail("duplicate attribute");
    }
    ev.attributes.push_back(std::move(attr));
  }
  if (open_.size() >= kMaxDepth) fail("element nesting too deep");
  open_.push_back(ev.name);
  root_seen_ = true;
  return ev;
}

Event Reader::read_end_tag() {
  pos_ += 2;  // "</"
  Event ev;
  ev.kind = EventKind::EndElement;
  ev.name = read_name();
  skip_space();
  if (pos_ >= doc_.size() || doc_[pos_] != '>') fail("unterminated end tag");
  ++pos_;
  if (open_.empty() || open_.back() != ev.name) fail("mismatched end tag");
  open_.pop_back();
  return ev;
}

Event Reader::next() {
  if (pending_end_) {
    Event ev;
    ev.kind = EventKind::EndElement;
    ev.name = std::move(*pending_end_);
    pending_end_.reset();
    open_.pop_back();
    return ev;
  }
  if (done_) return Event{};

  if (open_.empty()) {
    skip_misc();
    if (root_seen_) {
      if (pos_ != doc_.size()) fail("content after document element");
      done_ = true;
      return Event{};
    }
    if (starts_with("<!")) fail("DOCTYPE and declarations are not supported");
    if (pos_ >= doc_.size() || doc_[pos_] != '<') fail("expected document element");
    return read_start_tag();
  }

  for (;;) {
    if (pos_ >= doc_.size()) fail("unexpected end of document");
    if (starts_with("</")) return read_end_tag();
    if (starts_with("<!--")) {
      skip_comment();
      continue;
    }
    if (starts_with("<![CDATA[")) {
      const auto end = doc_.find("]]>", pos_ + 9);
      if (end == std::string_view::npos) fail("unterminated CDATA section");
      Event ev;
      ev.kind = EventKind::Text;
      ev.text = std::string(doc_.substr(pos_ + 9, end - pos_ - 9));
      pos_ = end + 3;
      return ev;
    }
    if (starts_with("<!")) fail("markup declaration inside element");
    if (starts_with("<?")) {
      skip_processing_instruction();
      continue;
    }
    if (doc_[pos_] == '<') return read_start_tag();

    Event ev;
    ev.kind = EventKind::Text;
    while (pos_ < doc_.size() && doc_[pos_] != '<') {
      const char c = doc_[pos_];
      if (c == '&') {
        ev.text += read_reference();
        continue;
      }
      if (c == '>' && pos_ >= 2 && doc_.substr(pos_ - 2, 2) == "]]") {
        fail("']]>' in character data");
      }
      if (c == '\r') {
        if (pos_ + 1 < doc_.size() && doc_[pos_ + 1] == '\n') ++pos_;
        ev.text.push_back('\n');
      } else {
        ev.text.push_back(c);
      }
      ++pos_;
    }
    return ev;
  }
}

const Attribute* Element::attribute(std::string_view attr_name) const noexcept {
  for (const auto& a : attributes) {
    if (a.name == attr_name) return &a;
  }
  return nullptr;
}

Element read_subtree(Reader& reader, Event start) {
  Element root;
  root.name = std::move(start.name);
  root.attributes = std::move(start.attributes);
  std::vector<Element*> stack{&root};
  while (!stack.empty()) {
    auto ev = reader.next();
    switch (ev.kind) {
      case EventKind::StartElement: {
        auto& child = stack.back()->children.emplace_back();
        child.name = std::move(ev.name);
        child.attributes = std::move(ev.attributes);
        stack.push_back(&child);
        break;
      }
      case EventKind::EndElement:
        stack.pop_back();
        break;
      case EventKind::Text:
        stack.back()->text += ev.text;
        break;
      case EventKind::EndOfDocument:
        throw Error(ErrorCode::MalformedXml, "unexpected end of document");
    }
  }
  return root;
}

Element parse(std::string_view document) {
  Reader reader(document);
  auto start = reader.next();
  if (start.kind != EventKind::StartElement) {
    throw Error(ErrorCode::MalformedXml, "document has no root element");
  }
  auto root = read_subtree(reader, std::move(start));
  if (reader.next().kind != EventKind::EndOfDocument) {
    throw Error(ErrorCode::MalformedXml, "content after document element");
  }
  return root;
}

std::string escape_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_attribute(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

bool is_blank(std::string_view text) noexcept {
  for (char c : text) {
    if (!is_space(c)) return false;
  }
  return true;
}

}  // namespace r2p2p::xml
