#pragma once

// Reference implementations used to check the library. They share no code
// with the units under test beyond the plain data types.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "r2p2p/advert.hpp"
#include "r2p2p/peer_id.hpp"
#include "r2p2p/relevance.hpp"

namespace oracle {

using Key = std::tuple<int, int, int, long double, std::string>;

// Key computed directly from the field definitions, with citations negated
// in floating point so it cannot share an overflow bug with the library.
Key key(const std::optional<r2p2p::RatingElement>& rating, const std::string& id,
        const r2p2p::UserProfile& profile);

// Index permutation of `advs` found by trying every ordering and keeping
// those whose keys never decrease. Throws if that ordering is not unique.
std::vector<std::size_t> permutation_sort(const std::vector<r2p2p::DocumentAdvertisement>& advs,
                                          const r2p2p::UserProfile& profile);

// For larger inputs: position of each element is the number of elements
// whose key is strictly smaller. Requires distinct ids.
std::vector<std::size_t> rank_sort(const std::vector<r2p2p::DocumentAdvertisement>& advs,
                                   const r2p2p::UserProfile& profile);

// Lowercased maximal runs of ASCII letters and digits.
std::set<std::string> ascii_tokens(const std::string& text);

bool matches(const r2p2p::DocumentAdvertisement& adv, const std::vector<std::string>& keywords);

// Group by id, keep the highest revision, union sources.
struct Grouped {
  r2p2p::DocumentAdvertisement advertisement;
  std::set<r2p2p::PeerId> sources;
};
std::vector<Grouped> group_max_revision(
    const std::vector<std::pair<r2p2p::DocumentAdvertisement, r2p2p::PeerId>>& items);

// Every decimal string that parses as citations must print back unchanged.
bool is_canonical_decimal(const std::string& text);

}  // namespace oracle

namespace gen {

using Rng = std::mt19937_64;

std::size_t below(Rng& rng, std::size_t n);
bool coin(Rng& rng, double p = 0.5);

// Text drawn from letters, digits, spaces, markup characters, multi-byte
// UTF-8 and tabs/newlines.
std::string text(Rng& rng, std::size_t max_len, bool allow_empty);
std::string hex(Rng& rng, std::size_t len);
std::string id(Rng& rng);

r2p2p::RatingElement rating(Rng& rng);
r2p2p::UserProfile profile(Rng& rng);
r2p2p::DocumentAdvertisement advertisement(Rng& rng);

// Advertisements with few distinct field values so keys collide often.
std::vector<r2p2p::DocumentAdvertisement> result_set(Rng& rng, std::size_t max_size,
                                                     double unrated_share = 0.2);

}  // namespace gen
