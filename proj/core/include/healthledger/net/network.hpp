#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "healthledger/common/crypto.hpp"
#include "healthledger/gateway/msp.hpp"
#include "healthledger/gateway/peer.hpp"
#include "healthledger/identity/ca_server.hpp"
#include "healthledger/net/topology.hpp"
#include "healthledger/ordering/orderer.hpp"

namespace hl::net {

enum class NodeRole { Orderer, Anchor, Gossip, Gateway };

struct NodeInfo {
  std::string id;
  std::string org;  // orderer org name for orderers, empty for the gateway
  NodeRole role = NodeRole::Orderer;
  std::uint16_t port = 0;
};

inline constexpr std::string_view kGatewayNode = "gateway";
inline constexpr std::string_view kOrdererOrg = "OrdererOrg";

struct NetworkOptions {
  ordering::BlockCutPolicy policy;
  ordering::RaftConfig raft;
  std::int64_t min_latency = 1;
  std::int64_t max_latency = 5;
  // Lagging peers ask their upstream for missing blocks this often.
  std::int64_t pull_interval = 25;
  std::size_t pull_batch = 16;
};

struct BlockDelivery {
  ledger::Block block;
};

/// In-process instance of the whole topology: per-org CAs, anchor and gossip
/// peers, Raft orderers, driven by a seeded tick scheduler. Nothing here is
/// thread-safe; see LiveDriver for concurrent use.
class Network {
 public:
  explicit Network(TopologyConfig config, NetworkOptions options = {});
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  const TopologyConfig& config() const { return config_; }
  const NetworkOptions& options() const { return options_; }
  const std::vector<NodeInfo>& nodes() const { return nodes_; }
  // Throws UnknownNode.
  const NodeInfo& node(const std::string& id) const;

  // ---- faults -------------------------------------------------------------
  void kill(const std::string& id);
  void partition(const std::set<std::string>& side_a, const std::set<std::string>& side_b);
  void heal();
  bool alive(const std::string& id) const;
  bool reachable(const std::string& from, const std::string& to) const;

  // ---- time -----------------------------------------------------------------
  std::int64_t now() const { return now_; }
  void step();
  void run_for(std::int64_t ticks);
  // Steps until `pred` holds; returns ticks elapsed (0 if already true).
  // Throws Timeout after max_ticks.
  std::int64_t run_until(const std::function<bool(const Network&)>& pred, std::int64_t max_ticks);

  // ---- components ---------------------------------------------------------------
  const ledger::Block& genesis() const { return genesis_; }
  std::shared_ptr<const gateway::Msp> msp() const { return msp_; }
  identity::CAServer& ca(const std::string& org);
  const identity::HealthCard& default_admin(const std::string& org) const;
  gateway::AnchorPeer& anchor(const std::string& org);
  const gateway::AnchorPeer& anchor(const std::string& org) const;
  const gateway::CommittingPeer& gossip(const std::string& id) const;
  const ordering::OrdererNode& orderer(const std::string& id) const;
  std::vector<std::string> orderer_ids() const;
  // Every live committing peer (anchors then gossip peers).
  std::vector<const gateway::CommittingPeer*> peers() const;

  // Live leader with the highest term, if any.
  std::optional<std::string> leader() const;
  // term -> every node that has acted as leader in it.
  const std::map<std::uint64_t, std::set<std::string>>& leaders_by_term() const { return leaders_by_term_; }
  bool election_safety_holds() const;

  // ---- client paths ---------------------------------------------------------------
  // Submission from the gateway node. Throws TargetUnreachable when the
  // orderer is dead or cut off from the gateway.
  ordering::SubmitResult submit(const std::string& orderer_id, const ledger::Transaction& tx);
  // Hands a block straight to a committing peer, as gossip would.
  // Throws whatever the peer's validation throws.
  void inject_block(const std::string& peer_id, const ledger::Block& block);

  // Counters for reports.
  std::uint64_t messages_sent() const { return sent_; }
  std::uint64_t messages_dropped() const { return dropped_; }

 private:
  struct Envelope {
    std::int64_t deliver_at = 0;
    std::uint64_t seq = 0;
    std::string from;
    std::string to;
    std::variant<ordering::SimMessage, BlockDelivery> body;
  };
  struct Later {
    bool operator()(const Envelope& a, const Envelope& b) const {
      return a.deliver_at != b.deliver_at ? a.deliver_at > b.deliver_at : a.seq > b.seq;
    }
  };
  struct PeerSlot {
    std::unique_ptr<gateway::CommittingPeer> peer;
    gateway::AnchorPeer* anchor = nullptr;
    std::string upstream_org;
    std::map<std::uint64_t, ledger::Block> buffered;
  };

  void send(std::string from, std::string to, std::variant<ordering::SimMessage, BlockDelivery> body);
  void deliver(Envelope& env);
  void accept_block(const std::string& peer_id, const ledger::Block& block);
  void push_new_blocks();
  void pull_missing();
  void record_leaders();
  PeerSlot& slot(const std::string& id);
  const PeerSlot& slot(const std::string& id) const;

  TopologyConfig config_;
  NetworkOptions options_;
  crypto::DeterministicRng rng_;
  std::int64_t now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t sent_ = 0;
  std::uint64_t dropped_ = 0;

  std::vector<NodeInfo> nodes_;
  std::map<std::string, identity::CAServer> cas_;
  std::map<std::string, identity::HealthCard> admins_;
  std::unique_ptr<identity::CAServer> orderer_ca_;
  ledger::Block genesis_;
  std::shared_ptr<const gateway::Msp> msp_;

  std::map<std::string, std::unique_ptr<ordering::OrdererNode>> orderers_;
  std::map<std::string, std::uint64_t> pushed_height_;
  std::map<std::string, PeerSlot> peers_;
  std::vector<std::string> peer_order_;

  std::set<std::string> killed_;
  std::vector<std::pair<std::set<std::string>, std::set<std::string>>> partitions_;
  std::priority_queue<Envelope, std::vector<Envelope>, Later> queue_;
  std::map<std::uint64_t, std::set<std::string>> leaders_by_term_;
};

}  // namespace hl::net
