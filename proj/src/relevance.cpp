#include "r2p2p/relevance.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "r2p2p/error.hpp"

namespace r2p2p {
namespace {

thread_local std::atomic<std::uint64_t>* active_counter = nullptr;

constexpr std::array<std::pair<UserEntity, Level>, 4> kLevelTable = {{
    {UserEntity::BTechStudent, Level::A},
    {UserEntity::MTechStudent, Level::B},
    {UserEntity::ResearchScholar, Level::C},
    {UserEntity::Professor, Level::D},
}};

constexpr std::array<std::pair<DocType, Descriptor>, 3> kDescriptorTable = {{
    {DocType::Basics, Descriptor::E},
    {DocType::Tutorial, Descriptor::F},
    {DocType::ResearchPaper, Descriptor::G},
}};

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

int ordinal(Level l) noexcept { return to_char(l) - 'A'; }

}  // namespace

Level level_code(UserEntity entity) noexcept {
  for (auto [e, l] : kLevelTable) {
    if (e == entity) return l;
  }
  return Level::A;  // unreachable for valid enumerators
}

Level level_code(std::string_view entity_name) {
  for (auto [e, l] : kLevelTable) {
    if (iequals(display_name(e), entity_name)) return l;
  }
  if (iequals(entity_name, "Research Scholar")) return Level::C;
  throw Error(ErrorCode::UnknownEntity, "unknown user entity '" + std::string(entity_name) + "'");
}

Descriptor descriptor_code(DocType doc_type) noexcept {
  for (auto [t, d] : kDescriptorTable) {
    if (t == doc_type) return d;
  }
  return Descriptor::E;
}

Descriptor descriptor_code(std::string_view doc_type_name) {
  for (auto [t, d] : kDescriptorTable) {
    if (iequals(display_name(t), doc_type_name)) return d;
  }
  throw Error(ErrorCode::UnknownDocType,
              "unknown document type '" + std::string(doc_type_name) + "'");
}

UserEntity decode_level(Level code) {
  for (auto [e, l] : kLevelTable) {
    if (l == code) return e;
  }
  throw Error(ErrorCode::InvalidCode,
              "level code '" + std::string(1, to_char(code)) + "' not in A-D");
}

DocType decode_descriptor(Descriptor code) {
  for (auto [t, d] : kDescriptorTable) {
    if (d == code) return t;
  }
  throw Error(ErrorCode::InvalidCode,
              "descriptor code '" + std::string(1, to_char(code)) + "' not in E-G");
}

UserEntity decode_level(std::string_view code) {
  if (code.size() == 1) {
    if (auto l = level_from_char(code[0])) return decode_level(*l);
  }
  throw Error(ErrorCode::InvalidCode, "level code '" + std::string(code) + "' not in A-D");
}

DocType decode_descriptor(std::string_view code) {
  if (code.size() == 1) {
    if (auto d = descriptor_from_char(code[0])) return decode_descriptor(*d);
  }
  throw Error(ErrorCode::InvalidCode, "descriptor code '" + std::string(code) + "' not in E-G");
}

std::string_view display_name(UserEntity entity) noexcept {
  switch (entity) {
    case UserEntity::BTechStudent: return "B-Tech Student";
    case UserEntity::MTechStudent: return "M-Tech Student";
    case UserEntity::ResearchScholar: return "Research Scholar (PhD)";
    case UserEntity::Professor: return "Professor";
  }
  return "";
}

std::string_view display_name(DocType doc_type) noexcept {
  switch (doc_type) {
    case DocType::Basics: return "Basics";
    case DocType::Tutorial: return "Tutorial";
    case DocType::ResearchPaper: return "Research paper";
  }
  return "";
}

RelevanceKey relevance_key(const std::optional<RatingElement>& rating,
                           std::string_view adv_id, const UserProfile& profile) {
  if (active_counter != nullptr) active_counter->fetch_add(1, std::memory_order_relaxed);

  RelevanceKey key;
  key.tiebreak_id = std::string(adv_id);
  if (!rating) {
    key.unrated_flag = 1;
    return key;
  }
  key.descriptor_mismatch =
      profile.desired_descriptor && *profile.desired_descriptor != rating->descriptor ? 1 : 0;
  const int d = ordinal(rating->level) - ordinal(profile.level);
  key.level_distance = d < 0 ? -d : d;
  key.negated_citations = -static_cast<std::int64_t>(rating->citations);
  return key;
}

KeyCounterScope::KeyCounterScope(std::atomic<std::uint64_t>& counter) noexcept
    : previous_(active_counter) {
  active_counter = &counter;
}

KeyCounterScope::~KeyCounterScope() { active_counter = previous_; }

std::vector<SourcedAdvertisement> sort_results(std::vector<SourcedAdvertisement> results,
                                               const UserProfile& profile) {
  std::vector<std::pair<RelevanceKey, std::size_t>> keyed;
  keyed.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& adv = results[i].first;
    keyed.emplace_back(relevance_key(adv.rating, adv.id, profile), i);
  }
  std::ranges::sort(keyed);  // index breaks ties, so the sort is stable
  std::vector<SourcedAdvertisement> out;
  out.reserve(results.size());
  for (auto& [key, index] : keyed) out.push_back(std::move(results[index]));
  return out;
}

}  // namespace r2p2p
