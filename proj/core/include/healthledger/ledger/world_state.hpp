#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "healthledger/common/canonical.hpp"
#include "healthledger/ledger/block.hpp"
#include "healthledger/ledger/transaction.hpp"

namespace hl::ledger {

struct VersionedValue {
  std::string value;
  Version version;

  bool operator==(const VersionedValue&) const = default;
};

/// Current values of the ledger keyed by `<contract>/<entity>/<id>`.
/// Rebuildable by replaying every block from genesis.
class WorldState {
 public:
  std::optional<VersionedValue> get(std::string_view key) const;
  // All entries whose key starts with `prefix`, in key order.
  std::vector<std::pair<std::string, VersionedValue>> scan(std::string_view prefix) const;

  std::uint64_t height() const { return height_; }
  std::size_t size() const { return entries_.size(); }
  bool contains_tx(const Digest256& tx_id) const { return tx_ids_.contains(tx_id); }

  const std::map<std::string, VersionedValue, std::less<>>& entries() const { return entries_; }

  // Canonical snapshot: entries, committed tx ids and height.
  Json to_json() const;
  static WorldState from_json(const Json& j);
  std::string encode() const { return canonical_dump(to_json()); }

  void save_snapshot(const std::filesystem::path& path) const;
  static WorldState load_snapshot(const std::filesystem::path& path);

  bool operator==(const WorldState&) const = default;

 private:
  friend std::vector<TxValidity> apply_block(const Block& block, WorldState& state);

  std::map<std::string, VersionedValue, std::less<>> entries_;
  std::set<Digest256> tx_ids_;
  std::uint64_t height_ = 0;
};

// MVCC commit in place: a transaction is valid iff every read version equals
// the current version and its tx_id was never committed before. Invalid
// transactions write nothing. Returns one flag per transaction.
std::vector<TxValidity> apply_block(const Block& block, WorldState& state);

// Pure form of apply_block.
std::pair<WorldState, std::vector<TxValidity>> commit_block(const Block& block, WorldState state);

std::optional<VersionedValue> query_state(const WorldState& state, std::string_view key);

std::string snapshot_file_name(std::string_view channel);

}  // namespace hl::ledger
