#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "r2p2p/advert.hpp"
#include "r2p2p/credentials.hpp"

namespace r2p2p {

struct DocumentRecord {
  DocumentAdvertisement advertisement;
  std::string content;
  std::string owner;

  friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

struct StoreOptions {
  std::string node_id = "node";
  std::string digest_algorithm = std::string(kDefaultDigest);
  // When set, records persist as records/<id>.xml + records/<id>.bin.
  std::optional<std::filesystem::path> directory;
};

/// Split on any character that is not an ASCII letter or digit and fold
/// ASCII to lowercase. Bytes >= 0x80 are kept inside tokens.
std::vector<std::string> tokenize(std::string_view text);

/// A peer's local documents and their advertisements.
///
/// Publishing requires an authenticated author or rater. Revising a rating
/// requires the record owner or an authenticated rater. Denied or failed
/// calls leave both memory and disk untouched.
///
/// Readers (match_query, lookup) may run concurrently; writers are
/// serialized.
class Store {
 public:
  Store(StoreOptions options, CredentialRegistry registry);

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  DocumentAdvertisement publish(std::string title, std::string summary, std::string content,
                                std::optional<RatingElement> rating, const Credential& cred);

  DocumentAdvertisement revise_rating(std::string_view adv_id, const RatingElement& new_rating,
                                      const Credential& cred);

  /// Advertisements whose title or summary contains every keyword as a
  /// whole token. An empty keyword list matches nothing.
  std::vector<DocumentAdvertisement> match_query(std::span<const std::string> keywords) const;

  DocumentRecord lookup(std::string_view adv_id) const;

  /// Adds a copy of a document obtained from another peer. An existing
  /// record with the same id is replaced only by a higher revision.
  void import_record(DocumentRecord record);

  std::size_t size() const;
  std::vector<DocumentRecord> snapshot() const;
  const std::string& digest_algorithm() const noexcept { return options_.digest_algorithm; }
  CredentialRegistry& registry() noexcept { return registry_; }

 private:
  void load_directory();
  void persist(const DocumentRecord& record, bool write_content) const;
  std::string fresh_id() const;
  void check_integrity(const DocumentRecord& record) const;

  StoreOptions options_;
  CredentialRegistry registry_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, DocumentRecord, std::less<>> records_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace r2p2p
