#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "healthledger/common/crypto.hpp"
#include "healthledger/ledger/block_store.hpp"
#include "healthledger/ordering/block_cutter.hpp"
#include "healthledger/ordering/raft_node.hpp"

namespace hl::ordering {

/// Ordering service node: a RaftNode whose committed log is turned into the
/// block stream. The leader appends signed cut markers; every node builds
/// the same blocks from committed markers, skipping transactions whose
/// tx_id already appeared in an earlier block.
class OrdererNode {
 public:
  OrdererNode(NodeId id, std::vector<NodeId> peers, std::uint64_t seed, crypto::KeyPair signing_key,
              const ledger::Block& genesis, BlockCutPolicy policy = {}, RaftConfig raft = {});

  std::vector<SimMessage> handle(const SimMessage& message);
  // Clock tick: Raft timers, then block cutting if leader.
  std::vector<SimMessage> tick(std::int64_t now);

  // Throws Error{Oversize} if the transaction cannot fit in a block on its
  // own, Error{Validation} if it carries no endorsement. A tx_id already in
  // the log or in a block is acknowledged without appending again.
  SubmitResult submit(const ledger::Transaction& tx, std::vector<SimMessage>& outbound);

  const NodeId& id() const { return raft_.id(); }
  const RaftNode& raft() const { return raft_; }
  bool is_leader() const { return raft_.role() == RaftRole::Leader; }
  const ledger::BlockStore& chain() const { return chain_; }
  const BlockCutPolicy& policy() const { return policy_; }
  bool block_contains(const Digest256& tx_id) const { return materialized_ids_.contains(tx_id); }

 private:
  void materialize();
  void try_cut(std::vector<SimMessage>& out);
  ledger::Block assemble(const CutMarker& marker, const ledger::BlockHeader& prev,
                         std::set<Digest256>& seen) const;
  void refresh_log_index();

  RaftNode raft_;
  crypto::KeyPair key_;
  BlockCutPolicy policy_;
  ledger::BlockStore chain_;

  std::uint64_t applied_index_ = 0;
  // Log index of the last transaction range already turned into a block.
  std::uint64_t cut_upto_ = 0;
  std::set<Digest256> materialized_ids_;

  std::unordered_set<Digest256> log_tx_ids_;
  std::uint64_t indexed_upto_ = 0;
  std::uint64_t indexed_term_ = 0;
};

}  // namespace hl::ordering
