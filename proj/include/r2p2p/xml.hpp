#pragma once

// Minimal non-validating XML 1.0 reader and writer helpers.
//
// Supports elements, attributes, character data, CDATA sections, comments,
// processing instructions, the five predefined entities and numeric
// character references. DOCTYPE declarations are rejected. Any
// well-formedness violation raises Error{ErrorCode::MalformedXml}.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace r2p2p::xml {

struct Attribute {
  std::string name;
  std::string value;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

enum class EventKind { StartElement, EndElement, Text, EndOfDocument };

struct Event {
  EventKind kind = EventKind::EndOfDocument;
  std::string name;
  std::vector<Attribute> attributes;
  std::string text;
};

/// Pull parser over a complete in-memory document.
///
/// Events are produced in document order. Text events carry decoded
/// character data; adjacent runs may arrive as separate events. The reader
/// checks the whole document, so draining it to EndOfDocument proves the
/// input is well-formed even when the caller ignores most events.
class Reader {
 public:
  explicit Reader(std::string_view document);

  Event next();
  std::size_t depth() const noexcept { return open_.size(); }

 private:
  void skip_misc();
  void skip_comment();
  void skip_processing_instruction();
  Event read_start_tag();
  Event read_end_tag();
  std::string read_name();
  std::string read_attribute_value();
  std::string read_reference();
  void skip_space();
  bool starts_with(std::string_view s) const noexcept;
  [[noreturn]] void fail(std::string_view why) const;

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::vector<std::string> open_;
  std::optional<std::string> pending_end_;
  bool root_seen_ = false;
  bool done_ = false;
};

struct Element {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<Element> children;
  std::string text;  // all character data directly inside this element

  const Attribute* attribute(std::string_view name) const noexcept;
};

/// Parses a full document into a tree rooted at the document element.
Element parse(std::string_view document);

/// Collects the element opened by `start` (a StartElement event just
/// returned by `reader`) into a tree, consuming through its end tag.
Element read_subtree(Reader& reader, Event start);

std::string escape_text(std::string_view text);
std::string escape_attribute(std::string_view text);

bool is_blank(std::string_view text) noexcept;

}  // namespace r2p2p::xml
