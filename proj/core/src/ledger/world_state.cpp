#include "healthledger/ledger/world_state.hpp"

#include <fstream>
#include <sstream>

#include "healthledger/common/error.hpp"

namespace hl::ledger {

std::optional<VersionedValue> WorldState::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<std::string, VersionedValue>> WorldState::scan(std::string_view prefix) const {
  std::vector<std::pair<std::string, VersionedValue>> out;
  for (auto it = entries_.lower_bound(prefix); it != entries_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.emplace_back(it->first, it->second);
  }
  return out;
}

Json WorldState::to_json() const {
  auto entries = Json::object();
  for (const auto& [key, vv] : entries_) {
    entries[key] = Json{{"value", vv.value}, {"version", version_to_json(vv.version)}};
  }
  auto ids = Json::array();
  for (const auto& id : tx_ids_) ids.push_back(id.hex());
  return Json{{"entries", std::move(entries)}, {"height", height_}, {"tx_ids", std::move(ids)}};
}

WorldState WorldState::from_json(const Json& j) {
  WorldState s;
  for (const auto& [key, v] : require(j, "entries").items()) {
    auto version = version_from_json(require(v, "version"));
    if (!version) fail(ErrorKind::Validation, "snapshot entry without version");
    s.entries_.emplace(key, VersionedValue{require_string(v, "value"), *version});
  }
  for (const auto& id : require(j, "tx_ids")) s.tx_ids_.insert(Digest256::from_hex(id.get<std::string>()));
  s.height_ = require_uint(j, "height");
  return s;
}

void WorldState::save_snapshot(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + tmp.string());
    out << encode();
    out.flush();
    if (!out) fail(ErrorKind::Io, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

WorldState WorldState::load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(canonical_parse(buf.str()));
}

std::vector<TxValidity> apply_block(const Block& block, WorldState& state) {
  std::vector<TxValidity> flags;
  flags.reserve(block.transactions.size());
  for (std::size_t i = 0; i < block.transactions.size(); ++i) {
    const auto& tx = block.transactions[i];
    bool valid = !state.tx_ids_.contains(tx.tx_id);
    for (const auto& read : tx.read_set) {
      if (!valid) break;
      auto it = state.entries_.find(read.key);
      std::optional<Version> current;
      if (it != state.entries_.end()) current = it->second.version;
      valid = current == read.version;
    }
    if (!valid) {
      flags.push_back(TxValidity::Invalid);
      continue;
    }
    Version version{block.header.number, static_cast<std::uint32_t>(i)};
    for (const auto& write : tx.write_set) {
      if (write.value) {
        state.entries_.insert_or_assign(write.key, VersionedValue{*write.value, version});
      } else {
        state.entries_.erase(write.key);
      }
    }
    state.tx_ids_.insert(tx.tx_id);
    flags.push_back(TxValidity::Valid);
  }
  state.height_ = block.header.number + 1;
  return flags;
}

std::pair<WorldState, std::vector<TxValidity>> commit_block(const Block& block, WorldState state) {
  auto flags = apply_block(block, state);
  return {std::move(state), std::move(flags)};
}

std::optional<VersionedValue> query_state(const WorldState& state, std::string_view key) { return state.get(key); }

std::string snapshot_file_name(std::string_view channel) { return "state-" + std::string(channel) + ".snap"; }

}  // namespace hl::ledger
