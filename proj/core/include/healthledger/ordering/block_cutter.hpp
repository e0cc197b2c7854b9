#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "healthledger/ledger/block.hpp"

namespace hl::ordering {

struct BlockCutPolicy {
  std::size_t max_tx_count = 10;
  std::size_t max_bytes = ledger::kMaxBlockBytes;
  std::int64_t max_wait_ms = 500;

  // Throws Error{Config} unless every bound is positive and max_bytes is
  // within the block cap.
  void validate() const;
};

/// A committed transaction not yet placed in a block.
struct PendingTx {
  std::uint64_t log_index = 0;
  const ledger::Transaction* tx = nullptr;
  std::int64_t received_at_ms = 0;
};

struct CutPlan {
  ledger::Block block;  // header filled in, not yet signed
  std::uint64_t last_log_index = 0;
  std::size_t tx_count = 0;
};

// Cuts when `max_tx_count` transactions are pending, when the next pending
// transaction would push the committed encoding past `max_bytes`, or when
// the oldest pending transaction has waited `max_wait_ms`. Otherwise
// returns nullopt (not yet). `signer` is the node id recorded in the block.
std::optional<CutPlan> cut_block(std::span<const PendingTx> pending, const BlockCutPolicy& policy,
                                 const ledger::BlockHeader& prev, std::int64_t now_ms, const std::string& signer);

// Committed size of a block holding exactly one transaction.
std::size_t single_tx_block_size(const ledger::Transaction& tx, const std::string& signer);

}  // namespace hl::ordering
