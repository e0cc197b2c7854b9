#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "healthledger/ledger/block_store.hpp"
#include "healthledger/ledger/world_state.hpp"

namespace hl::ledger {

struct ValidationReport {
  bool valid = true;
  std::optional<std::uint64_t> first_bad_height;
  std::string reason;
};

// Re-checks every stored record from genesis: canonical form, height,
// prev-hash link, data hash, orderer signature against the consenters named
// in genesis, and stored validity flags against an MVCC replay.
ValidationReport validate_chain(const BlockStore& store);
ValidationReport validate_records(const std::vector<std::string>& records, bool truncated = false);

// Folds commit_block over every block from genesis into an empty state.
WorldState replay(const BlockStore& store);

// Link check for a single block received from elsewhere (gossip).
bool links_to(const Block& block, const Block& previous);
bool verify_block_signature(const Block& block, const ConsortiumConfig& consortium);

}  // namespace hl::ledger
