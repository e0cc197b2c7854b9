#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "healthledger/common/canonical.hpp"
#include "healthledger/identity/certificate.hpp"
#include "healthledger/ledger/transaction.hpp"
#include "healthledger/ledger/world_state.hpp"

namespace hl::chaincode {

/// Stakeholder role of an invoker, derived from the card role and the
/// organization that issued it.
enum class Stakeholder { Nagorik, Doctor, Authority, Admin };

std::string_view to_string(Stakeholder s);
std::optional<Stakeholder> parse_stakeholder(std::string_view text);

struct Invoker {
  std::string identity_id;
  std::string org;
  identity::Role card_role = identity::Role::User;
  Stakeholder stakeholder = Stakeholder::Nagorik;
};

/// Simulation of one invocation against a world-state snapshot. Reads are
/// recorded with the version seen; writes are buffered and visible to later
/// reads of the same invocation.
class TxContext {
 public:
  TxContext(const ledger::WorldState& snapshot, Invoker invoker, Digest256 tx_id, std::int64_t now_ms);

  const Invoker& invoker() const { return invoker_; }
  const Digest256& tx_id() const { return tx_id_; }
  std::int64_t now_ms() const { return now_ms_; }

  std::optional<std::string> get(const std::string& key);
  std::optional<Json> get_json(const std::string& key);
  // Every live key under `prefix`, pending writes included, key order.
  std::vector<std::pair<std::string, Json>> scan_json(const std::string& prefix);

  void put(const std::string& key, std::string value);
  void put_json(const std::string& key, const Json& value) { put(key, canonical_dump(value)); }
  void del(const std::string& key);

  // Short deterministic id for entities created by this invocation.
  std::string derive_id(std::string_view tag) const;

  std::vector<ledger::ReadEntry> read_set() const;
  std::vector<ledger::WriteEntry> write_set() const;

 private:
  void record_read(const std::string& key, const std::optional<ledger::Version>& version);

  const ledger::WorldState& snapshot_;
  Invoker invoker_;
  Digest256 tx_id_;
  std::int64_t now_ms_;
  std::map<std::string, std::optional<ledger::Version>> reads_;
  std::map<std::string, std::optional<std::string>> writes_;
  mutable std::uint32_t id_counter_ = 0;
};

}  // namespace hl::chaincode
