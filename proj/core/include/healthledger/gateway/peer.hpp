#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "healthledger/common/canonical.hpp"
#include "healthledger/gateway/msp.hpp"
#include "healthledger/identity/health_card.hpp"
#include "healthledger/ledger/block_store.hpp"
#include "healthledger/ledger/transaction.hpp"
#include "healthledger/ledger/world_state.hpp"

namespace hl::gateway {

struct CommitReceipt {
  std::uint64_t block_number = 0;
  std::uint32_t tx_index = 0;
  bool valid = false;

  bool operator==(const CommitReceipt&) const = default;
};

struct Endorsed {
  ledger::Transaction tx;
  Json result;
};

// Signs the proposal body with the card and fills in the certificate.
ledger::Proposal make_proposal(const identity::HealthCard& card, std::string fn, Json args, Bytes nonce,
                               std::int64_t created_at_ms);
// Throws InvalidSignature.
void verify_proposal(const ledger::Proposal& proposal);

/// Committing peer shared by anchors and gossip peers: keeps a chain and
/// world state, accepts only blocks that link to its tip and carry a valid
/// orderer signature.
class CommittingPeer {
 public:
  CommittingPeer(std::string id, std::string org, const ledger::Block& genesis,
                 std::optional<std::filesystem::path> data_dir = std::nullopt);

  const std::string& id() const { return id_; }
  const std::string& org() const { return org_; }
  std::uint64_t height() const { return chain_.height(); }
  const ledger::BlockStore& chain() const { return chain_; }
  const ledger::WorldState& state() const { return state_; }
  const ledger::ConsortiumConfig& consortium() const { return consortium_; }

  // Validates and commits. Throws ChainLink / Height / InvalidSignature.
  // A block with stored flags must agree with the local MVCC result.
  std::vector<ledger::TxValidity> commit(const ledger::Block& block);
  std::optional<CommitReceipt> receipt(const Digest256& tx_id) const;

 private:
  std::string id_;
  std::string org_;
  ledger::ConsortiumConfig consortium_;
  ledger::BlockStore chain_;
  ledger::WorldState state_;
  std::optional<std::filesystem::path> data_dir_;
  std::map<Digest256, CommitReceipt> receipts_;
};

/// Org peer that also executes chaincode. Endorsement runs against a copy of
/// the current world state; nothing is written until the block commits.
class AnchorPeer : public CommittingPeer {
 public:
  AnchorPeer(std::string id, identity::HealthCard peer_card, const ledger::Block& genesis,
             std::shared_ptr<const Msp> msp, std::optional<std::filesystem::path> data_dir = std::nullopt);

  // Proposal signature, MSP check, then chaincode on a snapshot.
  Endorsed endorse(const ledger::Proposal& proposal) const;
  // Read-only evaluation; the result is not ordered.
  Json query(const ledger::Proposal& proposal) const;

  const identity::Certificate& certificate() const { return card_.certificate; }
  const Msp& msp() const { return *msp_; }

 private:
  identity::HealthCard card_;
  std::shared_ptr<const Msp> msp_;
};

// Endorser cert is a peer of a consortium org and its signature covers
// (tx_id, response_digest).
bool verify_endorsement(const ledger::Endorsement& e, const ledger::Transaction& tx, const Msp& msp);
std::string endorsement_payload(const Digest256& tx_id, const Digest256& response_digest);

}  // namespace hl::gateway
