#include "healthledger/net/network.hpp"

#include <algorithm>

#include "healthledger/common/error.hpp"

namespace hl::net {

Network::Network(TopologyConfig config, NetworkOptions options)
    : config_(std::move(config)), options_(options), rng_(config_.seed) {
  config_.validate();
  options_.policy.validate();
  if (options_.min_latency < 1 || options_.max_latency < options_.min_latency) {
    fail(ErrorKind::Config, "latency range must satisfy 1 <= min <= max");
  }

  // Key material comes from the seeded generator, so a given seed always
  // yields the same certificates, genesis block and block hashes.
  ledger::ConsortiumConfig consortium;
  std::map<std::string, identity::HealthCard> anchor_cards;
  std::map<std::string, chaincode::Stakeholder> stakeholders;
  for (const auto& org : config_.orgs) {
    auto ca = identity::CAServer::bootstrap(org.name, rng_);
    admins_.emplace(org.name, ca.enroll_default_admin(rng_));
    anchor_cards.emplace(org.name, ca.issue_card(anchor_id(org.name), identity::Role::Peer, rng_));
    consortium.orgs.push_back({org.name, ca.root_cert()});
    stakeholders[org.name] = org.stakeholder;
    cas_.emplace(org.name, std::move(ca));
  }
  orderer_ca_ = std::make_unique<identity::CAServer>(identity::CAServer::bootstrap(std::string(kOrdererOrg), rng_));
  consortium.orderer_org = {std::string(kOrdererOrg), orderer_ca_->root_cert()};
  std::map<std::string, identity::HealthCard> orderer_cards;
  for (const auto& o : config_.orderers) {
    auto card = orderer_ca_->issue_card(o.id, identity::Role::Orderer, rng_);
    consortium.consenters.push_back({o.id, card.certificate});
    orderer_cards.emplace(o.id, std::move(card));
  }
  genesis_ = ledger::create_genesis_block(consortium);
  msp_ = std::make_shared<gateway::Msp>(consortium, stakeholders);

  for (const auto& o : config_.orderers) {
    std::vector<std::string> others;
    for (const auto& p : config_.orderers) {
      if (p.id != o.id) others.push_back(p.id);
    }
    auto key = crypto::KeyPair::from_seed(orderer_cards.at(o.id).private_key);
    orderers_.emplace(o.id, std::make_unique<ordering::OrdererNode>(o.id, others, config_.seed, std::move(key),
                                                                    genesis_, options_.policy, options_.raft));
    pushed_height_[o.id] = 1;
    nodes_.push_back({o.id, std::string(kOrdererOrg), NodeRole::Orderer, o.port});
  }
  for (const auto& org : config_.orgs) {
    auto id = anchor_id(org.name);
    PeerSlot s;
    auto anchor = std::make_unique<gateway::AnchorPeer>(id, anchor_cards.at(org.name), genesis_, msp_);
    s.anchor = anchor.get();
    s.peer = std::move(anchor);
    peers_.emplace(id, std::move(s));
    peer_order_.push_back(id);
    nodes_.push_back({id, org.name, NodeRole::Anchor, org.anchor_port});
  }
  for (const auto& org : config_.orgs) {
    for (std::size_t g = 0; g < org.gossip_ports.size(); ++g) {
      auto id = gossip_id(org.name, g);
      PeerSlot s;
      s.peer = std::make_unique<gateway::CommittingPeer>(id, org.name, genesis_);
      s.upstream_org = org.name;
      peers_.emplace(id, std::move(s));
      peer_order_.push_back(id);
      nodes_.push_back({id, org.name, NodeRole::Gossip, org.gossip_ports[g]});
    }
  }
  nodes_.push_back({std::string(kGatewayNode), "", NodeRole::Gateway, config_.gateway_internal_port});
}

const NodeInfo& Network::node(const std::string& id) const {
  for (const auto& n : nodes_) {
    if (n.id == id) return n;
  }
  fail(ErrorKind::UnknownNode, "no node '" + id + "'");
}

// ---- faults ---------------------------------------------------------------------

void Network::kill(const std::string& id) {
  node(id);
  killed_.insert(id);
}

void Network::partition(const std::set<std::string>& side_a, const std::set<std::string>& side_b) {
  for (const auto& id : side_a) node(id);
  for (const auto& id : side_b) node(id);
  partitions_.emplace_back(side_a, side_b);
}

void Network::heal() { partitions_.clear(); }

bool Network::alive(const std::string& id) const { return !killed_.contains(id); }

bool Network::reachable(const std::string& from, const std::string& to) const {
  if (!alive(from) || !alive(to)) return false;
  for (const auto& [a, b] : partitions_) {
    if ((a.contains(from) && b.contains(to)) || (b.contains(from) && a.contains(to))) return false;
  }
  return true;
}

// ---- scheduling ---------------------------------------------------------------------

void Network::send(std::string from, std::string to, std::variant<ordering::SimMessage, BlockDelivery> body) {
  ++sent_;
  if (!reachable(from, to)) {
    ++dropped_;
    return;
  }
  auto at = now_ + rng_.uniform(options_.min_latency, options_.max_latency);
  queue_.push(Envelope{at, seq_++, std::move(from), std::move(to), std::move(body)});
}

void Network::deliver(Envelope& env) {
  if (!reachable(env.from, env.to)) {
    ++dropped_;
    return;
  }
  if (auto* m = std::get_if<ordering::SimMessage>(&env.body)) {
    auto it = orderers_.find(env.to);
    if (it == orderers_.end()) return;
    for (auto& out : it->second->handle(*m)) {
      auto to = out.to;
      send(env.to, std::move(to), std::move(out));
    }
    return;
  }
  accept_block(env.to, std::get<BlockDelivery>(env.body).block);
}

void Network::accept_block(const std::string& peer_id, const ledger::Block& block) {
  auto& s = slot(peer_id);
  auto number = block.header.number;
  if (number < s.peer->height()) return;
  if (number > s.peer->height()) {
    if (number < s.peer->height() + 4 * options_.pull_batch) s.buffered.emplace(number, block);
    return;
  }
  auto pending = block;
  while (true) {
    try {
      s.peer->commit(pending);
    } catch (const Error&) {
      // A bad block is dropped here; the peer will pull a good copy later.
      s.buffered.clear();
      return;
    }
    if (s.anchor) {
      const auto& committed = s.peer->chain().tip();
      for (const auto& id : peer_order_) {
        const auto& other = peers_.at(id);
        if (!other.anchor && other.upstream_org == s.peer->org()) send(peer_id, id, BlockDelivery{committed});
      }
    }
    auto next = s.buffered.find(s.peer->height());
    if (next == s.buffered.end()) break;
    pending = std::move(next->second);
    s.buffered.erase(s.buffered.begin(), std::next(next));
  }
  std::erase_if(s.buffered, [&](const auto& kv) { return kv.first < s.peer->height(); });
}

void Network::push_new_blocks() {
  for (const auto& o : config_.orderers) {
    if (!alive(o.id)) continue;
    const auto& chain = orderers_.at(o.id)->chain();
    auto& pushed = pushed_height_[o.id];
    for (; pushed < chain.height(); ++pushed) {
      for (const auto& org : config_.orgs) send(o.id, anchor_id(org.name), BlockDelivery{chain.at(pushed)});
    }
  }
}

void Network::pull_missing() {
  for (const auto& id : peer_order_) {
    if (!alive(id)) continue;
    auto& s = peers_.at(id);
    auto height = s.peer->height();
    if (s.anchor) {
      const ordering::OrdererNode* best = nullptr;
      for (const auto& o : config_.orderers) {
        if (!reachable(o.id, id)) continue;
        const auto* node = orderers_.at(o.id).get();
        if (!best || node->chain().height() > best->chain().height()) best = node;
      }
      if (!best) continue;
      auto upto = std::min<std::uint64_t>(best->chain().height(), height + options_.pull_batch);
      for (auto n = height; n < upto; ++n) send(best->id(), id, BlockDelivery{best->chain().at(n)});
    } else {
      auto up = anchor_id(s.upstream_org);
      if (!reachable(up, id)) continue;
      const auto& source = peers_.at(up).peer->chain();
      auto upto = std::min<std::uint64_t>(source.height(), height + options_.pull_batch);
      for (auto n = height; n < upto; ++n) send(up, id, BlockDelivery{source.at(n)});
    }
  }
}

void Network::record_leaders() {
  for (const auto& [id, node] : orderers_) {
    if (alive(id) && node->is_leader()) leaders_by_term_[node->raft().current_term()].insert(id);
  }
}

void Network::step() {
  ++now_;
  while (!queue_.empty() && queue_.top().deliver_at <= now_) {
    auto env = queue_.top();
    queue_.pop();
    deliver(env);
  }
  for (const auto& o : config_.orderers) {
    if (!alive(o.id)) continue;
    for (auto& out : orderers_.at(o.id)->tick(now_)) {
      auto to = out.to;
      send(o.id, std::move(to), std::move(out));
    }
  }
  record_leaders();
  push_new_blocks();
  if (now_ % options_.pull_interval == 0) pull_missing();
}

void Network::run_for(std::int64_t ticks) {
  for (std::int64_t i = 0; i < ticks; ++i) step();
}

std::int64_t Network::run_until(const std::function<bool(const Network&)>& pred, std::int64_t max_ticks) {
  for (std::int64_t t = 0;; ++t) {
    if (pred(*this)) return t;
    if (t >= max_ticks) break;
    step();
  }
  fail(ErrorKind::Timeout, "condition not reached within " + std::to_string(max_ticks) + " ticks");
}

// ---- components --------------------------------------------------------------------

Network::PeerSlot& Network::slot(const std::string& id) {
  auto it = peers_.find(id);
  if (it == peers_.end()) fail(ErrorKind::UnknownNode, "no peer '" + id + "'");
  return it->second;
}

const Network::PeerSlot& Network::slot(const std::string& id) const {
  auto it = peers_.find(id);
  if (it == peers_.end()) fail(ErrorKind::UnknownNode, "no peer '" + id + "'");
  return it->second;
}

identity::CAServer& Network::ca(const std::string& org) {
  auto it = cas_.find(org);
  if (it == cas_.end()) fail(ErrorKind::UnknownNode, "no organization '" + org + "'");
  return it->second;
}

const identity::HealthCard& Network::default_admin(const std::string& org) const {
  auto it = admins_.find(org);
  if (it == admins_.end()) fail(ErrorKind::UnknownNode, "no organization '" + org + "'");
  return it->second;
}

gateway::AnchorPeer& Network::anchor(const std::string& org) {
  auto& s = slot(anchor_id(org));
  return *s.anchor;
}

const gateway::AnchorPeer& Network::anchor(const std::string& org) const { return *slot(anchor_id(org)).anchor; }

const gateway::CommittingPeer& Network::gossip(const std::string& id) const { return *slot(id).peer; }

const ordering::OrdererNode& Network::orderer(const std::string& id) const {
  auto it = orderers_.find(id);
  if (it == orderers_.end()) fail(ErrorKind::UnknownNode, "no orderer '" + id + "'");
  return *it->second;
}

std::vector<std::string> Network::orderer_ids() const {
  std::vector<std::string> ids;
  for (const auto& o : config_.orderers) ids.push_back(o.id);
  return ids;
}

std::vector<const gateway::CommittingPeer*> Network::peers() const {
  std::vector<const gateway::CommittingPeer*> out;
  for (const auto& id : peer_order_) {
    if (alive(id)) out.push_back(peers_.at(id).peer.get());
  }
  return out;
}

std::optional<std::string> Network::leader() const {
  std::optional<std::string> best;
  std::uint64_t term = 0;
  for (const auto& o : config_.orderers) {
    const auto& node = *orderers_.at(o.id);
    if (!alive(o.id) || !node.is_leader()) continue;
    if (!best || node.raft().current_term() > term) {
      best = o.id;
      term = node.raft().current_term();
    }
  }
  return best;
}

bool Network::election_safety_holds() const {
  return std::all_of(leaders_by_term_.begin(), leaders_by_term_.end(),
                     [](const auto& kv) { return kv.second.size() <= 1; });
}

// ---- client paths ------------------------------------------------------------------

ordering::SubmitResult Network::submit(const std::string& orderer_id, const ledger::Transaction& tx) {
  auto it = orderers_.find(orderer_id);
  if (it == orderers_.end()) fail(ErrorKind::UnknownNode, "no orderer '" + orderer_id + "'");
  if (!reachable(std::string(kGatewayNode), orderer_id)) {
    fail(ErrorKind::TargetUnreachable, "orderer '" + orderer_id + "' is unreachable");
  }
  std::vector<ordering::SimMessage> out;
  auto result = it->second->submit(tx, out);
  for (auto& m : out) {
    auto to = m.to;
    send(orderer_id, std::move(to), std::move(m));
  }
  return result;
}

void Network::inject_block(const std::string& peer_id, const ledger::Block& block) {
  auto& s = slot(peer_id);
  s.peer->commit(block);
}

}  // namespace hl::net
