#include "healthledger/identity/wallet.hpp"

#include <fstream>
#include <mutex>
#include <sstream>

#include "healthledger/common/error.hpp"

namespace hl::identity {

namespace fs = std::filesystem;

namespace {

void check_path_component(const std::string& s, const char* what) {
  if (s.empty() || s.front() == '.' || s.find('/') != std::string::npos || s.find('\\') != std::string::npos) {
    fail(ErrorKind::Validation, std::string("unusable ") + what + " '" + s + "'");
  }
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_private_file(const fs::path& file, const std::string& content) {
  fs::create_directories(file.parent_path());
  {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + file.string());
    out << content;
    if (!out.flush()) fail(ErrorKind::Io, "short write to " + file.string());
  }
  fs::permissions(file, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
}

}  // namespace

Wallet::Wallet(fs::path directory) : directory_(std::move(directory)) {
  fs::create_directories(*directory_);
  for (const auto& org_dir : fs::directory_iterator(*directory_)) {
    if (!org_dir.is_directory()) continue;
    for (const auto& entry : fs::directory_iterator(org_dir.path())) {
      if (entry.path().extension() != ".card") continue;
      auto card = HealthCard::from_json(canonical_parse(read_file(entry.path())));
      cards_.emplace(card.identity_id, std::move(card));
    }
  }
}

fs::path Wallet::card_path(const HealthCard& card) const {
  return *directory_ / card.org / (card.identity_id + ".card");
}

void Wallet::put(const HealthCard& card) {
  check_path_component(card.identity_id, "identity id");
  check_path_component(card.org, "org name");
  std::unique_lock lock(mutex_);
  if (cards_.contains(card.identity_id)) {
    fail(ErrorKind::DuplicateIdentity, "identity '" + card.identity_id + "' already holds a health card");
  }
  if (directory_) write_private_file(card_path(card), canonical_dump(card.to_json()));
  cards_.emplace(card.identity_id, card);
}

std::optional<HealthCard> Wallet::get(const std::string& identity_id) const {
  std::shared_lock lock(mutex_);
  auto it = cards_.find(identity_id);
  if (it == cards_.end()) return std::nullopt;
  return it->second;
}

bool Wallet::contains(const std::string& identity_id) const {
  std::shared_lock lock(mutex_);
  return cards_.contains(identity_id);
}

bool Wallet::remove(const std::string& identity_id) {
  std::unique_lock lock(mutex_);
  auto it = cards_.find(identity_id);
  if (it == cards_.end()) return false;
  if (directory_) fs::remove(card_path(it->second));
  cards_.erase(it);
  return true;
}

std::vector<std::string> Wallet::identities() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : cards_) out.push_back(id);
  return out;
}

std::size_t Wallet::size() const {
  std::shared_lock lock(mutex_);
  return cards_.size();
}

void export_certificate(const Certificate& cert, const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + file.string());
  out << canonical_dump(cert.to_json());
}

Certificate import_certificate(const fs::path& file) {
  return Certificate::from_json(canonical_parse(read_file(file)));
}

}  // namespace hl::identity
