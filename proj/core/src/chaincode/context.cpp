#include "healthledger/chaincode/context.hpp"

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"

namespace hl::chaincode {

std::string_view to_string(Stakeholder s) {
  switch (s) {
    case Stakeholder::Nagorik: return "nagorik";
    case Stakeholder::Doctor: return "doctor";
    case Stakeholder::Authority: return "authority";
    case Stakeholder::Admin: return "admin";
  }
  return "nagorik";
}

std::optional<Stakeholder> parse_stakeholder(std::string_view text) {
  if (text == "nagorik") return Stakeholder::Nagorik;
  if (text == "doctor") return Stakeholder::Doctor;
  if (text == "authority") return Stakeholder::Authority;
  if (text == "admin") return Stakeholder::Admin;
  return std::nullopt;
}

TxContext::TxContext(const ledger::WorldState& snapshot, Invoker invoker, Digest256 tx_id, std::int64_t now_ms)
    : snapshot_(snapshot), invoker_(std::move(invoker)), tx_id_(tx_id), now_ms_(now_ms) {}

void TxContext::record_read(const std::string& key, const std::optional<ledger::Version>& version) {
  // First read wins; later reads of the same key see the same snapshot.
  reads_.emplace(key, version);
}

std::optional<std::string> TxContext::get(const std::string& key) {
  if (auto w = writes_.find(key); w != writes_.end()) return w->second;
  auto stored = snapshot_.get(key);
  record_read(key, stored ? std::optional(stored->version) : std::nullopt);
  if (!stored) return std::nullopt;
  return stored->value;
}

std::optional<Json> TxContext::get_json(const std::string& key) {
  auto raw = get(key);
  if (!raw) return std::nullopt;
  return canonical_parse(*raw);
}

std::vector<std::pair<std::string, Json>> TxContext::scan_json(const std::string& prefix) {
  std::map<std::string, std::string> merged;
  for (auto& [key, vv] : snapshot_.scan(prefix)) {
    record_read(key, vv.version);
    merged.emplace(key, vv.value);
  }
  for (const auto& [key, value] : writes_) {
    if (key.compare(0, prefix.size(), prefix) != 0) continue;
    if (value) {
      merged.insert_or_assign(key, *value);
    } else {
      merged.erase(key);
    }
  }
  std::vector<std::pair<std::string, Json>> out;
  out.reserve(merged.size());
  for (auto& [key, value] : merged) out.emplace_back(key, canonical_parse(value));
  return out;
}

void TxContext::put(const std::string& key, std::string value) {
  if (key.empty()) fail(ErrorKind::Validation, "empty state key");
  writes_.insert_or_assign(key, std::move(value));
}

void TxContext::del(const std::string& key) { writes_.insert_or_assign(key, std::nullopt); }

std::string TxContext::derive_id(std::string_view tag) const {
  auto material = tx_id_.hex() + ":" + std::string(tag) + ":" + std::to_string(id_counter_++);
  return crypto::sha256(material).hex().substr(0, 16);
}

std::vector<ledger::ReadEntry> TxContext::read_set() const {
  std::vector<ledger::ReadEntry> out;
  for (const auto& [key, version] : reads_) out.push_back({key, version});
  return out;
}

std::vector<ledger::WriteEntry> TxContext::write_set() const {
  std::vector<ledger::WriteEntry> out;
  for (const auto& [key, value] : writes_) out.push_back({key, value});
  return out;
}

}  // namespace hl::chaincode
