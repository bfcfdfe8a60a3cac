#pragma once

// User-relative ordering of search results.
//
// Results are ranked by a five-field key compared lexicographically:
//   1. rated results before unrated ones
//   2. descriptor matching the user's desired document type first
//   3. smaller distance between document level and user level first
//   4. more citations first
//   5. advertisement id, ascending, so the order is total

#include <atomic>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "r2p2p/advert.hpp"
#include "r2p2p/peer_id.hpp"

namespace r2p2p {

enum class UserEntity { BTechStudent, MTechStudent, ResearchScholar, Professor };
enum class DocType { Basics, Tutorial, ResearchPaper };

Level level_code(UserEntity entity) noexcept;
/// Accepts the display names ("B-Tech Student", ...), case-insensitively.
/// Throws UnknownEntity.
Level level_code(std::string_view entity_name);

Descriptor descriptor_code(DocType doc_type) noexcept;
/// Accepts the display names ("Basics", "Tutorial", "Research paper"),
/// case-insensitively. Throws UnknownDocType.
Descriptor descriptor_code(std::string_view doc_type_name);

UserEntity decode_level(Level code);
DocType decode_descriptor(Descriptor code);
/// Single-letter forms; throw InvalidCode outside A-D / E-G.
UserEntity decode_level(std::string_view code);
DocType decode_descriptor(std::string_view code);

std::string_view display_name(UserEntity entity) noexcept;
std::string_view display_name(DocType doc_type) noexcept;

struct UserProfile {
  Level level = Level::A;
  std::optional<Descriptor> desired_descriptor;
};

struct RelevanceKey {
  int unrated_flag = 0;
  int descriptor_mismatch = 0;
  int level_distance = 0;
  std::int64_t negated_citations = 0;
  std::string tiebreak_id;

  friend auto operator<=>(const RelevanceKey&, const RelevanceKey&) = default;
};

RelevanceKey relevance_key(const std::optional<RatingElement>& rating,
                           std::string_view adv_id, const UserProfile& profile);

/// While alive, every relevance_key call on this thread increments `counter`.
/// Scopes nest; the innermost one wins.
class KeyCounterScope {
 public:
  explicit KeyCounterScope(std::atomic<std::uint64_t>& counter) noexcept;
  ~KeyCounterScope();
  KeyCounterScope(const KeyCounterScope&) = delete;
  KeyCounterScope& operator=(const KeyCounterScope&) = delete;

 private:
  std::atomic<std::uint64_t>* previous_;
};

using SourcedAdvertisement = std::pair<DocumentAdvertisement, PeerId>;

/// Stable permutation of `results` in ascending key order.
std::vector<SourcedAdvertisement> sort_results(std::vector<SourcedAdvertisement> results,
                                               const UserProfile& profile);

}  // namespace r2p2p
