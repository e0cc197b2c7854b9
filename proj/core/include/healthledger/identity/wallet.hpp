#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "healthledger/identity/health_card.hpp"

namespace hl::identity {

/// identity_id -> HealthCard. With a directory, each card is mirrored to
/// `<dir>/<org>/<identity_id>.card` readable by the owner only.
class Wallet {
 public:
  Wallet() = default;
  // Loads every existing card under `directory`.
  explicit Wallet(std::filesystem::path directory);

  // Throws DuplicateIdentity if a card for the identity is already held.
  void put(const HealthCard& card);
  std::optional<HealthCard> get(const std::string& identity_id) const;
  bool contains(const std::string& identity_id) const;
  // Removes the card and its file. Returns false if absent.
  bool remove(const std::string& identity_id);
  std::vector<std::string> identities() const;
  std::size_t size() const;

 private:
  std::filesystem::path card_path(const HealthCard& card) const;

  std::optional<std::filesystem::path> directory_;
  std::map<std::string, HealthCard> cards_;
  mutable std::shared_mutex mutex_;
};

void export_certificate(const Certificate& cert, const std::filesystem::path& file);
Certificate import_certificate(const std::filesystem::path& file);

}  // namespace hl::identity
