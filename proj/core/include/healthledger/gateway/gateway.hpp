#pragma once

#include <cstdint>
#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "healthledger/common/crypto.hpp"
#include "healthledger/gateway/doc_store.hpp"
#include "healthledger/gateway/peer.hpp"
#include "healthledger/identity/enrollment.hpp"
#include "healthledger/identity/wallet.hpp"
#include "healthledger/net/driver.hpp"

namespace hl::gateway {

enum class EndorsementPolicy {
  // One endorsement from the anchor of the invoker's org.
  InvokerOrg,
  // Every org anchor, all with the same response digest.
  AllOrgs,
};

struct GatewayOptions {
  std::int64_t commit_timeout_ms = 10'000;
  // Without a receipt after this long the same tx is sent again.
  std::int64_t resubmit_after_ms = 1'000;
  std::int64_t session_idle_ms = 30 * 60 * 1000;
  std::size_t doc_limit = kDefaultDocLimit;
  EndorsementPolicy policy = EndorsementPolicy::InvokerOrg;
  std::string default_admin_password = "adminpw";
  std::size_t max_leader_hops = 3;
};

struct Session {
  std::string token;
  std::string identity_id;
  std::string org;
  chaincode::Stakeholder stakeholder = chaincode::Stakeholder::Nagorik;
  std::int64_t last_seen_ms = 0;
};

struct InvokeResult {
  Json result;
  Digest256 tx_id;
  // Absent for queries.
  std::optional<CommitReceipt> receipt;
};

/// Client-facing side of the network: sessions, the endorse -> order ->
/// commit flow, identity registration and the document store. Safe to call
/// from many threads when the driver is.
class Gateway {
 public:
  Gateway(net::Driver& driver, GatewayOptions options = {}, std::uint64_t nonce_seed = 0);

  // Default admin of every org goes into the wallet and its password record
  // onto the ledger. Throws AlreadyBootstrapped on a second call.
  void bootstrap();

  Session login(const std::string& identity_id, std::string_view password);
  void logout(const std::string& token);
  // Throws SessionExpired for unknown or idle tokens; refreshes last_seen.
  Session session(const std::string& token);

  // Admin-only: issue a card under the admin's org CA and commit its
  // password record.
  identity::HealthCard register_user(const std::string& token, const identity::UserProfile& profile,
                                     identity::Role role, std::string_view password);

  InvokeResult invoke(const std::string& token, const std::string& fn, Json args);
  // Same, acting directly with a card (harness and tests).
  InvokeResult invoke_as(const identity::HealthCard& card, const std::string& fn, Json args);

  // Collects endorsements per policy. Throws PolicyUnsatisfied.
  Endorsed endorse(const ledger::Proposal& proposal);
  // Orders a transaction and waits for the invoker org's anchor to commit it.
  CommitReceipt submit_and_wait(const ledger::Transaction& tx, std::int64_t timeout_ms);

  Digest256 put_document(const std::string& token, Bytes content, std::string media_type);
  OffChainDoc get_document(const std::string& token, const Digest256& digest);

  identity::Wallet& wallet() { return wallet_; }
  net::Driver& driver() { return driver_; }
  const GatewayOptions& options() const { return options_; }
  std::uint64_t chain_height();

 private:
  ledger::Proposal propose(const identity::HealthCard& card, const std::string& fn, Json args);
  identity::HealthCard card_for(const Session& s) const;
  std::string submit_once(const ledger::Transaction& tx, std::string target);
  // Waits (bounded) until the anchors of `orgs` hold every block this
  // gateway has already reported as committed.
  void catch_up(const std::vector<std::string>& orgs);

  net::Driver& driver_;
  GatewayOptions options_;
  identity::Wallet wallet_;
  DocStore docs_;

  std::mutex mutex_;
  crypto::DeterministicRng nonce_rng_;
  std::map<std::string, Session> sessions_;
  std::string last_leader_;
  bool bootstrapped_ = false;
  std::atomic<std::uint64_t> seen_height_{0};
};

}  // namespace hl::gateway
