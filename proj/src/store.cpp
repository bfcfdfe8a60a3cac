#include "r2p2p/store.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "r2p2p/digest.hpp"
#include "r2p2p/error.hpp"
#include "r2p2p/fileio.hpp"

namespace r2p2p {
namespace {

bool is_token_char(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         u >= 0x80;
}

std::string id_safe(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? std::string("node") : out;
}

std::filesystem::path records_dir(const std::filesystem::path& root) { return root / "records"; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_token_char(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Store::Store(StoreOptions options, CredentialRegistry registry)
    : options_(std::move(options)), registry_(std::move(registry)) {
  if (!digest_available(options_.digest_algorithm)) {
    throw Error(ErrorCode::ConfigError,
                "unknown digest algorithm '" + options_.digest_algorithm + "'");
  }
  if (options_.directory) load_directory();
}

void Store::load_directory() {
  const auto dir = records_dir(*options_.directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string());

  std::vector<std::filesystem::path> xml_files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      xml_files.push_back(entry.path());
    }
  }
  std::ranges::sort(xml_files);
  for (const auto& path : xml_files) {
    DocumentRecord record;
    record.advertisement = parse_advertisement(read_file(path));
    auto bin = path;
    bin.replace_extension(".bin");
    record.content = read_file(bin);
    record.owner = record.advertisement.author_id;
    if (path.stem().string() != record.advertisement.id) {
      throw Error(ErrorCode::IntegrityError, path.string() + " holds a different advertisement id");
    }
    check_integrity(record);
    records_.emplace(record.advertisement.id, std::move(record));
  }
  next_seq_ = records_.size() + 1;
}

void Store::check_integrity(const DocumentRecord& record) const {
  if (hex_digest(options_.digest_algorithm, record.content) !=
      record.advertisement.content_hash) {
    throw Error(ErrorCode::IntegrityError,
                "content hash mismatch for " + record.advertisement.id);
  }
  if (record.owner != record.advertisement.author_id) {
    throw Error(ErrorCode::IntegrityError, "owner differs from author for " +
                                               record.advertisement.id);
  }
}

void Store::persist(const DocumentRecord& record, bool write_content) const {
  if (!options_.directory) return;
  const auto base = records_dir(*options_.directory) / record.advertisement.id;
  // The .xml file is the commit point: a record without one is never loaded.
  if (write_content) {
    auto bin = base;
    bin += ".bin";
    write_file_atomic(bin, record.content);
  }
  auto xml = base;
  xml += ".xml";
  write_file_atomic(xml, serialize_advertisement(record.advertisement));
}

std::string Store::fresh_id() const {
  const auto prefix = std::string(kNamespaceUri) + ":" + id_safe(options_.node_id) + "-";
  for (auto seq = next_seq_;; ++seq) {
    auto id = prefix + std::to_string(seq);
    if (!records_.contains(id)) return id;
  }
}

DocumentAdvertisement Store::publish(std::string title, std::string summary, std::string content,
                                     std::optional<RatingElement> rating,
                                     const Credential& cred) {
  std::unique_lock lock(mutex_);
  if (cred.role == Role::Reader || !registry_.authenticate(cred)) {
    throw Error(ErrorCode::Unauthorized,
                "principal '" + cred.principal_id + "' may not publish documents");
  }
  if (rating && !is_valid(*rating)) {
    throw Error(ErrorCode::InvalidRating, "rating violates its invariants");
  }

  DocumentRecord record;
  auto& adv = record.advertisement;
  adv.id = fresh_id();
  adv.title = std::move(title);
  adv.summary = std::move(summary);
  adv.author_id = cred.principal_id;
  adv.content_hash = hex_digest(options_.digest_algorithm, content);
  adv.rating = rating;
  adv.revision = 1;
  validate(adv);
  record.content = std::move(content);
  record.owner = cred.principal_id;

  persist(record, true);
  const auto seq_text = adv.id.substr(adv.id.rfind('-') + 1);
  next_seq_ = std::stoull(seq_text) + 1;
  auto result = adv;
  records_.emplace(adv.id, std::move(record));
  return result;
}

DocumentAdvertisement Store::revise_rating(std::string_view adv_id,
                                           const RatingElement& new_rating,
                                           const Credential& cred) {
  std::unique_lock lock(mutex_);
  const auto it = records_.find(adv_id);
  if (it == records_.end()) {
    throw Error(ErrorCode::NotFound, "no document with id '" + std::string(adv_id) + "'");
  }
  const bool authenticated = registry_.authenticate(cred);
  const bool is_owner = authenticated && cred.role != Role::Reader &&
                        cred.principal_id == it->second.owner;
  const bool is_rater = authenticated && cred.role == Role::Rater;
  if (!is_owner && !is_rater) {
    throw Error(ErrorCode::Unauthorized, "principal '" + cred.principal_id +
                                             "' may not revise the rating of " +
                                             std::string(adv_id));
  }
  if (!is_valid(new_rating)) {
    throw Error(ErrorCode::InvalidRating, "rating violates its invariants");
  }

  auto updated = it->second;
  updated.advertisement.rating = new_rating;
  updated.advertisement.revision += 1;
  persist(updated, false);
  it->second = std::move(updated);
  return it->second.advertisement;
}

std::vector<DocumentAdvertisement> Store::match_query(
    std::span<const std::string> keywords) const {
  std::set<std::string> wanted;
  for (const auto& k : keywords) {
    for (auto& t : tokenize(k)) wanted.insert(std::move(t));
  }
  std::vector<DocumentAdvertisement> hits;
  if (wanted.empty()) return hits;

  std::shared_lock lock(mutex_);
  for (const auto& [id, record] : records_) {
    const auto& adv = record.advertisement;
    auto tokens = tokenize(adv.title);
    auto more = tokenize(adv.summary);
    tokens.insert(tokens.end(), more.begin(), more.end());
    const std::set<std::string> have(tokens.begin(), tokens.end());
    if (std::ranges::includes(have, wanted)) hits.push_back(adv);
  }
  return hits;
}

DocumentRecord Store::lookup(std::string_view adv_id) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(adv_id);
  if (it == records_.end()) {
    throw Error(ErrorCode::NotFound, "no document with id '" + std::string(adv_id) + "'");
  }
  return it->second;
}

void Store::import_record(DocumentRecord record) {
  validate(record.advertisement);
  check_integrity(record);
  std::unique_lock lock(mutex_);
  const auto it = records_.find(record.advertisement.id);
  if (it != records_.end() &&
      it->second.advertisement.revision >= record.advertisement.revision) {
    return;
  }
  persist(record, true);
  records_.insert_or_assign(record.advertisement.id, std::move(record));
}

std::size_t Store::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::vector<DocumentRecord> Store::snapshot() const {
  std::shared_lock lock(mutex_);
  std::vector<DocumentRecord> out;
  out.reserve(records_.size());
  for (const auto& [id, record] : records_) out.push_back(record);
  return out;
}

}  // namespace r2p2p
