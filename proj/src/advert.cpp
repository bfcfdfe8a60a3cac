#include "r2p2p/advert.hpp"

#include <array>

#include "r2p2p/digest.hpp"
#include "r2p2p/error.hpp"
#include "r2p2p/xml.hpp"

namespace r2p2p {
namespace {

const std::string kRootName = std::string(kNamespacePrefix) + ":DocumentAdvertisement";
const std::string kNamespaceAttr = "xmlns:" + std::string(kNamespacePrefix);

bool has_forbidden_control(std::string_view text) noexcept {
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x20 && c != '\t' && c != '\n' && c != '\r') return true;
  }
  return false;
}

void check_root(std::string_view name, const std::vector<xml::Attribute>& attrs) {
  if (name != kRootName) {
    throw Error(ErrorCode::UnexpectedElement,
                "root element is '" + std::string(name) + "', expected " + kRootName);
  }
  bool ns_bound = false;
  for (const auto& a : attrs) {
    if (a.name == kNamespaceAttr && a.value == kNamespaceUri) {
      ns_bound = true;
    } else {
      throw Error(ErrorCode::UnexpectedElement,
                  "unexpected attribute '" + a.name + "' on " + kRootName);
    }
  }
  if (!ns_bound) {
    throw Error(ErrorCode::MalformedXml,
                "namespace prefix '" + std::string(kNamespacePrefix) + "' is not bound to " +
                    std::string(kNamespaceUri));
  }
}

const std::string& leaf_text(const xml::Element& e) {
  if (!e.children.empty()) {
    throw Error(ErrorCode::UnexpectedElement,
                "element <" + e.children.front().name + "> inside <" + e.name + ">");
  }
  if (!e.attributes.empty()) {
    throw Error(ErrorCode::UnexpectedElement, "attribute on <" + e.name + ">");
  }
  return e.text;
}

void check_container(const xml::Element& e) {
  if (!xml::is_blank(e.text)) {
    throw Error(ErrorCode::UnexpectedElement, "character data inside <" + e.name + ">");
  }
}

std::uint64_t parse_revision(std::string_view text) {
  if (text.empty() || text.size() > 19 || text[0] == '0') {
    throw Error(ErrorCode::InvalidField, "revision must be a positive canonical integer");
  }
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::InvalidField, "revision must be a positive canonical integer");
    }
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

Level parse_level(std::string_view text) {
  if (text.size() == 1) {
    if (auto l = level_from_char(text[0])) return *l;
  }
  throw Error(ErrorCode::InvalidCode, "level code '" + std::string(text) + "' not in A-D");
}

Descriptor parse_descriptor(std::string_view text) {
  if (text.size() == 1) {
    if (auto d = descriptor_from_char(text[0])) return *d;
  }
  throw Error(ErrorCode::InvalidCode,
              "descriptor code '" + std::string(text) + "' not in E-G");
}

RatingElement decode_rating(const xml::Element& rating) {
  if (!rating.attributes.empty()) {
    throw Error(ErrorCode::UnexpectedElement, "attribute on <Rating>");
  }
  check_container(rating);
  const xml::Element* slots[3] = {nullptr, nullptr, nullptr};
  static constexpr std::array<std::string_view, 3> kNames = {"Citations", "Level",
                                                             "Descriptor"};
  for (const auto& child : rating.children) {
    std::size_t i = 0;
    while (i < kNames.size() && kNames[i] != child.name) ++i;
    if (i == kNames.size()) {
      throw Error(ErrorCode::UnexpectedElement, "unknown element <" + child.name + "> in <Rating>");
    }
    if (slots[i] != nullptr) {
      throw Error(ErrorCode::UnexpectedElement, "duplicate <" + child.name + "> in <Rating>");
    }
    slots[i] = &child;
  }
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (slots[i] == nullptr) {
      throw Error(ErrorCode::MissingField, "<Rating> lacks <" + std::string(kNames[i]) + ">");
    }
  }
  RatingElement out;
  out.citations = parse_citations(leaf_text(*slots[0]));
  out.level = parse_level(leaf_text(*slots[1]));
  out.descriptor = parse_descriptor(leaf_text(*slots[2]));
  return out;
}

void append_leaf(std::string& out, std::string_view name, std::string_view text) {
  out += '<';
  out += name;
  out += '>';
  out += xml::escape_text(text);
  out += "</";
  out += name;
  out += '>';
}

}  // namespace

std::optional<Level> level_from_char(char c) noexcept {
  if (c >= 'A' && c <= 'D') return static_cast<Level>(c);
  return std::nullopt;
}

std::optional<Descriptor> descriptor_from_char(char c) noexcept {
  if (c >= 'E' && c <= 'G') return static_cast<Descriptor>(c);
  return std::nullopt;
}

bool is_valid(Level l) noexcept { return level_from_char(to_char(l)).has_value(); }

bool is_valid(Descriptor d) noexcept {
  return descriptor_from_char(to_char(d)).has_value();
}

bool is_valid(const RatingElement& rating) noexcept {
  return rating.citations <= kMaxCitations && is_valid(rating.level) &&
         is_valid(rating.descriptor);
}

bool is_valid_id(std::string_view id) noexcept {
  if (id.empty()) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == ':' || c == '.' || c == '_' ||
                    c == '-';
    if (!ok) return false;
  }
  return true;
}

void validate(const DocumentAdvertisement& adv) {
  if (!is_valid_id(adv.id)) {
    throw Error(ErrorCode::InvalidField, "advertisement id '" + adv.id + "' is not URN-safe");
  }
  if (adv.title.empty()) throw Error(ErrorCode::InvalidField, "title is empty");
  if (adv.author_id.empty()) throw Error(ErrorCode::InvalidField, "author is empty");
  if (has_forbidden_control(adv.title) || has_forbidden_control(adv.summary) ||
      has_forbidden_control(adv.author_id)) {
    throw Error(ErrorCode::InvalidField, "control character in text field");
  }
  if (!is_lower_hex(adv.content_hash)) {
    throw Error(ErrorCode::InvalidField, "content hash is not lowercase hex");
  }
  if (adv.revision < 1) throw Error(ErrorCode::InvalidField, "revision must be >= 1");
  if (adv.rating && !is_valid(*adv.rating)) {
    throw Error(ErrorCode::InvalidRating, "rating violates its invariants");
  }
}

std::uint64_t parse_citations(std::string_view text) {
  const auto bad = [&] {
    return Error(ErrorCode::InvalidCitations,
                 "citations '" + std::string(text) + "' is not a canonical non-negative integer");
  };
  if (text.empty() || (text.size() > 1 && text[0] == '0')) throw bad();
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw bad();
    const auto digit = static_cast<std::uint64_t>(c - '0');
    if (v > (kMaxCitations - digit) / 10) throw bad();
    v = v * 10 + digit;
  }
  return v;
}

std::string serialize_advertisement(const DocumentAdvertisement& adv) {
  validate(adv);
  std::string out(kXmlDeclaration);
  out += '<' + kRootName + ' ' + kNamespaceAttr + "=\"" + std::string(kNamespaceUri) + "\">";
  append_leaf(out, "Id", adv.id);
  append_leaf(out, "Title", adv.title);
  append_leaf(out, "Summary", adv.summary);
  append_leaf(out, "Author", adv.author_id);
  append_leaf(out, "ContentHash", adv.content_hash);
  append_leaf(out, "Revision", std::to_string(adv.revision));
  if (adv.rating) {
    out += "<Rating>";
    append_leaf(out, "Citations", std::to_string(adv.rating->citations));
    append_leaf(out, "Level", std::string(1, to_char(adv.rating->level)));
    append_leaf(out, "Descriptor", std::string(1, to_char(adv.rating->descriptor)));
    out += "</Rating>";
  }
  out += "</" + kRootName + '>';
  return out;
}

DocumentAdvertisement parse_advertisement(std::string_view text) {
  const auto root = xml::parse(text);
  check_root(root.name, root.attributes);
  check_container(root);

  enum Slot { kId, kTitle, kSummary, kAuthor, kHash, kRevision, kRating, kSlots };
  static constexpr std::array<std::string_view, kSlots> kNames = {
      "Id", "Title", "Summary", "Author", "ContentHash", "Revision", "Rating"};
  std::array<const xml::Element*, kSlots> slots{};
  for (const auto& child : root.children) {
    std::size_t i = 0;
    while (i < kSlots && kNames[i] != child.name) ++i;
    if (i == kSlots) {
      throw Error(ErrorCode::UnexpectedElement, "unknown element <" + child.name + ">");
    }
    if (slots[i] != nullptr) {
      throw Error(ErrorCode::UnexpectedElement, "duplicate element <" + child.name + ">");
    }
    slots[i] = &child;
  }
  for (std::size_t i = 0; i < kRating; ++i) {
    if (slots[i] == nullptr) {
      throw Error(ErrorCode::MissingField, "advertisement lacks <" + std::string(kNames[i]) + ">");
    }
  }

  DocumentAdvertisement adv;
  adv.id = leaf_text(*slots[kId]);
  adv.title = leaf_text(*slots[kTitle]);
  adv.summary = leaf_text(*slots[kSummary]);
  adv.author_id = leaf_text(*slots[kAuthor]);
  adv.content_hash = leaf_text(*slots[kHash]);
  adv.revision = parse_revision(leaf_text(*slots[kRevision]));
  if (slots[kRating] != nullptr) adv.rating = decode_rating(*slots[kRating]);
  validate(adv);
  return adv;
}

std::optional<RatingElement> extract_rating(std::string_view text) {
  xml::Reader reader(text);
  auto root = reader.next();
  if (root.kind != xml::EventKind::StartElement) {
    throw Error(ErrorCode::MalformedXml, "document has no root element");
  }
  check_root(root.name, root.attributes);

  std::optional<RatingElement> rating;
  for (;;) {
    auto ev = reader.next();
    if (ev.kind == xml::EventKind::EndOfDocument) break;
    if (ev.kind == xml::EventKind::StartElement && reader.depth() == 2 &&
        ev.name == "Rating") {
      if (rating) throw Error(ErrorCode::UnexpectedElement, "duplicate element <Rating>");
      rating = decode_rating(xml::read_subtree(reader, std::move(ev)));
    }
  }
  return rating;
}

}  // namespace r2p2p
