#include "healthledger/ordering/block_cutter.hpp"

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"

namespace hl::ordering {

void BlockCutPolicy::validate() const {
  if (max_tx_count == 0) fail(ErrorKind::Config, "max_tx_count must be positive");
  if (max_bytes == 0 || max_bytes > ledger::kMaxBlockBytes) {
    fail(ErrorKind::Config, "max_bytes must be in (0, " + std::to_string(ledger::kMaxBlockBytes) + "]");
  }
  if (max_wait_ms <= 0) fail(ErrorKind::Config, "max_wait_ms must be positive");
}

namespace {

// Committed size of a block with the given header and no transactions,
// carrying a full-length signature.
std::size_t empty_block_size(const ledger::BlockHeader& header, const std::string& signer) {
  ledger::Block shell;
  shell.header = header;
  shell.signer = signer;
  shell.orderer_signature = Bytes(crypto::kSignatureSize, 0);
  return shell.encoded_size();
}

}  // namespace

std::size_t single_tx_block_size(const ledger::Transaction& tx, const std::string& signer) {
  ledger::BlockHeader h;
  h.number = 1;
  // Each transaction adds its encoding plus one flag character.
  return empty_block_size(h, signer) + tx.encoded_size() + 1;
}

std::optional<CutPlan> cut_block(std::span<const PendingTx> pending, const BlockCutPolicy& policy,
                                 const ledger::BlockHeader& prev, std::int64_t now_ms, const std::string& signer) {
  if (pending.empty()) return std::nullopt;

  ledger::BlockHeader header;
  header.number = prev.number + 1;
  header.prev_hash = ledger::compute_block_hash(prev);
  header.timestamp_ms = now_ms;

  // Size of the encoding grows by tx size + separator comma + one flag.
  auto size = empty_block_size(header, signer);
  std::size_t taken = 0;
  bool size_bound = false;
  for (const auto& p : pending) {
    if (taken == policy.max_tx_count) break;
    auto grown = size + p.tx->encoded_size() + 1 + (taken > 0 ? 1 : 0);
    if (grown > policy.max_bytes) {
      size_bound = true;
      break;
    }
    size = grown;
    ++taken;
  }

  bool count_bound = taken == policy.max_tx_count;
  bool aged = now_ms - pending.front().received_at_ms >= policy.max_wait_ms;
  if (taken == 0 || !(count_bound || size_bound || aged)) return std::nullopt;

  CutPlan plan;
  plan.tx_count = taken;
  plan.last_log_index = pending[taken - 1].log_index;
  plan.block.header = header;
  plan.block.signer = signer;
  for (std::size_t i = 0; i < taken; ++i) plan.block.transactions.push_back(*pending[i].tx);
  plan.block.header.data_hash = ledger::compute_data_hash(plan.block.transactions);
  return plan;
}

}  // namespace hl::ordering
