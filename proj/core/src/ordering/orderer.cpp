#include "healthledger/ordering/orderer.hpp"

#include "healthledger/common/error.hpp"

namespace hl::ordering {

OrdererNode::OrdererNode(NodeId id, std::vector<NodeId> peers, std::uint64_t seed, crypto::KeyPair signing_key,
                         const ledger::Block& genesis, BlockCutPolicy policy, RaftConfig raft)
    : raft_(std::move(id), std::move(peers), seed, raft), key_(std::move(signing_key)), policy_(policy) {
  policy_.validate();
  chain_.append(genesis);
}

std::vector<SimMessage> OrdererNode::handle(const SimMessage& message) {
  auto out = raft_.step(message);
  materialize();
  return out;
}

std::vector<SimMessage> OrdererNode::tick(std::int64_t now) {
  auto out = raft_.tick(now);
  materialize();
  if (is_leader()) try_cut(out);
  return out;
}

void OrdererNode::refresh_log_index() {
  const auto last = raft_.last_index();
  bool stale = indexed_upto_ > last || (indexed_upto_ > 0 && raft_.term_at(indexed_upto_) != indexed_term_);
  if (stale) {
    log_tx_ids_.clear();
    indexed_upto_ = 0;
  }
  for (auto i = indexed_upto_ + 1; i <= last; ++i) {
    if (const auto* tx = std::get_if<ledger::Transaction>(&raft_.entry(i).payload)) log_tx_ids_.insert(tx->tx_id);
  }
  indexed_upto_ = last;
  indexed_term_ = raft_.term_at(last);
}

SubmitResult OrdererNode::submit(const ledger::Transaction& tx, std::vector<SimMessage>& outbound) {
  if (tx.endorsements.empty()) fail(ErrorKind::Validation, "transaction carries no endorsement");
  if (single_tx_block_size(tx, id()) > policy_.max_bytes) {
    fail(ErrorKind::Oversize, "transaction alone exceeds the " + std::to_string(policy_.max_bytes) + "-byte block cap");
  }
  if (!is_leader()) return NotLeader{raft_.leader_hint()};

  refresh_log_index();
  if (materialized_ids_.contains(tx.tx_id)) return Accepted{0};
  if (log_tx_ids_.contains(tx.tx_id)) return Accepted{0};

  auto result = raft_.propose(tx, outbound);
  refresh_log_index();
  materialize();
  return result;
}

ledger::Block OrdererNode::assemble(const CutMarker& marker, const ledger::BlockHeader& prev,
                                    std::set<Digest256>& seen) const {
  ledger::Block block;
  for (auto i = marker.first_index; i <= marker.last_index && i <= raft_.last_index(); ++i) {
    const auto* tx = std::get_if<ledger::Transaction>(&raft_.entry(i).payload);
    if (!tx || materialized_ids_.contains(tx->tx_id) || seen.contains(tx->tx_id)) continue;
    seen.insert(tx->tx_id);
    block.transactions.push_back(*tx);
  }
  block.header.number = prev.number + 1;
  block.header.prev_hash = ledger::compute_block_hash(prev);
  block.header.data_hash = ledger::compute_data_hash(block.transactions);
  block.header.timestamp_ms = marker.timestamp_ms;
  block.signer = marker.signer;
  block.orderer_signature = marker.signature;
  return block;
}

void OrdererNode::materialize() {
  while (applied_index_ < raft_.commit_index()) {
    ++applied_index_;
    const auto* marker = std::get_if<CutMarker>(&raft_.entry(applied_index_).payload);
    if (!marker) continue;
    if (marker->block_number != chain_.height() || marker->first_index != cut_upto_ + 1) continue;
    std::set<Digest256> seen;
    auto block = assemble(*marker, chain_.tip().header, seen);
    chain_.append(block);
    materialized_ids_.insert(seen.begin(), seen.end());
    cut_upto_ = marker->last_index;
  }
}

void OrdererNode::try_cut(std::vector<SimMessage>& out) {
  // Project blocks for markers this leader has appended that are not yet
  // committed, so the next cut continues after them.
  auto prev = chain_.tip().header;
  auto range_end = cut_upto_;
  std::set<Digest256> seen;
  for (auto i = applied_index_ + 1; i <= raft_.last_index(); ++i) {
    const auto* marker = std::get_if<CutMarker>(&raft_.entry(i).payload);
    if (!marker || marker->first_index != range_end + 1 || marker->block_number != prev.number + 1) continue;
    prev = assemble(*marker, prev, seen).header;
    range_end = marker->last_index;
  }

  std::vector<PendingTx> pending;
  std::set<Digest256> pending_ids;
  for (auto i = range_end + 1; i <= raft_.commit_index(); ++i) {
    const auto& entry = raft_.entry(i);
    const auto* tx = std::get_if<ledger::Transaction>(&entry.payload);
    if (!tx) continue;
    if (materialized_ids_.contains(tx->tx_id) || seen.contains(tx->tx_id) || pending_ids.contains(tx->tx_id)) continue;
    pending_ids.insert(tx->tx_id);
    pending.push_back(PendingTx{i, tx, entry.received_at_ms});
  }

  auto plan = cut_block(pending, policy_, prev, raft_.now(), id());
  if (!plan) return;

  CutMarker marker;
  marker.block_number = plan->block.header.number;
  marker.first_index = range_end + 1;
  marker.last_index = plan->last_log_index;
  marker.timestamp_ms = plan->block.header.timestamp_ms;
  marker.signer = id();
  marker.signature = key_.sign(as_bytes(ledger::header_signing_payload(plan->block.header)));
  raft_.propose(std::move(marker), out);
  materialize();
}

}  // namespace hl::ordering
