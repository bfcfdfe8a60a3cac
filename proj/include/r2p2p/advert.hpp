#pragma once

// Document advertisements and the <Rating> element they carry.
//
// Canonical wire form (UTF-8, no whitespace between elements, fixed order):
//
//   <?xml version="1.0"?>
//   <r2p2p:DocumentAdvertisement xmlns:r2p2p="urn:r2p2p"><Id>..</Id>
//   <Title>..</Title><Summary>..</Summary><Author>..</Author>
//   <ContentHash>..</ContentHash><Revision>..</Revision>
//   <Rating><Citations>..</Citations><Level>..</Level>
//   <Descriptor>..</Descriptor></Rating></r2p2p:DocumentAdvertisement>
//
// (wrapped here for width; only the newline after the declaration is real).
// The parser accepts any child order and blank text between elements but
// rejects unknown, duplicated or attributed children.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace r2p2p {

inline constexpr std::string_view kNamespacePrefix = "r2p2p";
inline constexpr std::string_view kNamespaceUri = "urn:r2p2p";
inline constexpr std::string_view kXmlDeclaration = "<?xml version=\"1.0\"?>\n";

// Audience level of a document (A..D, lowest to highest).
enum class Level : char { A = 'A', B = 'B', C = 'C', D = 'D' };

// Kind of document (E basics, F tutorial, G research paper).
enum class Descriptor : char { E = 'E', F = 'F', G = 'G' };

std::optional<Level> level_from_char(char c) noexcept;
std::optional<Descriptor> descriptor_from_char(char c) noexcept;
constexpr char to_char(Level l) noexcept { return static_cast<char>(l); }
constexpr char to_char(Descriptor d) noexcept { return static_cast<char>(d); }
bool is_valid(Level l) noexcept;
bool is_valid(Descriptor d) noexcept;

// Citation counts are bounded so that their negation fits a signed 64-bit key.
inline constexpr std::uint64_t kMaxCitations =
    static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());

struct RatingElement {
  std::uint64_t citations = 0;
  Level level = Level::A;
  Descriptor descriptor = Descriptor::E;

  friend bool operator==(const RatingElement&, const RatingElement&) = default;
};

bool is_valid(const RatingElement& rating) noexcept;

struct DocumentAdvertisement {
  std::string id;
  std::string title;
  std::string summary;
  std::string author_id;
  std::string content_hash;
  std::optional<RatingElement> rating;
  std::uint64_t revision = 1;

  friend bool operator==(const DocumentAdvertisement&,
                         const DocumentAdvertisement&) = default;
};

/// Ids are URN-style: non-empty, drawn from [A-Za-z0-9:._-].
bool is_valid_id(std::string_view id) noexcept;

/// Throws InvalidField (or InvalidRating for the rating subtree) when `adv`
/// breaks a type invariant.
void validate(const DocumentAdvertisement& adv);

/// Canonical decimal: digits only, no sign, no leading zeros except "0".
/// Throws InvalidCitations.
std::uint64_t parse_citations(std::string_view text);

std::string serialize_advertisement(const DocumentAdvertisement& adv);

/// Errors: MalformedXml, InvalidCode, InvalidCitations, MissingField,
/// UnexpectedElement, InvalidField.
DocumentAdvertisement parse_advertisement(std::string_view xml);

/// Reads only the <Rating> subtree. The whole document is still checked for
/// well-formedness and the root element, but no other field is decoded.
std::optional<RatingElement> extract_rating(std::string_view xml);

}  // namespace r2p2p
