#include "healthledger/ordering/raft_node.hpp"

#include <algorithm>

namespace hl::ordering {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, const NodeId& id) {
  // FNV-1a over the id, folded into the run seed.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return seed ^ h;
}

}  // namespace

RaftNode::RaftNode(NodeId id, std::vector<NodeId> peers, std::uint64_t seed, RaftConfig config)
    : id_(std::move(id)), peers_(std::move(peers)), config_(config), rng_(mix_seed(seed, id_)) {
  std::sort(peers_.begin(), peers_.end());
  reset_election_deadline();
}

std::uint64_t RaftNode::term_at(std::uint64_t index) const {
  if (index == 0 || index > log_.size()) return 0;
  return log_[index - 1].term;
}

void RaftNode::reset_election_deadline() {
  auto span = static_cast<std::uint64_t>(config_.election_timeout_max - config_.election_timeout_min) + 1;
  election_deadline_ = now_ + config_.election_timeout_min + static_cast<std::int64_t>(rng_() % span);
}

std::vector<SimMessage> RaftNode::tick(std::int64_t now) {
  now_ = std::max(now_, now);
  if (role_ == RaftRole::Leader) {
    if (now_ >= heartbeat_due_) return step(Heartbeat{});
  } else if (now_ >= election_deadline_) {
    return step(ElectionTimeout{});
  }
  return {};
}

std::vector<SimMessage> RaftNode::step(const Event& event) {
  std::vector<SimMessage> out;
  if (std::holds_alternative<ElectionTimeout>(event)) {
    if (role_ != RaftRole::Leader) become_candidate(out);
  } else if (std::holds_alternative<Heartbeat>(event)) {
    if (role_ == RaftRole::Leader) {
      broadcast_append(out);
      heartbeat_due_ = now_ + config_.heartbeat_interval;
    }
  } else {
    const auto& msg = std::get<SimMessage>(event);
    if (msg.to != id_) return out;
    auto term = message_term(msg.payload);
    if (term > current_term_) become_follower(term);
    std::visit([&](const auto& m) { handle(msg.from, m, out); }, msg.payload);
  }
  return out;
}

void RaftNode::become_follower(std::uint64_t term) {
  if (term > current_term_) {
    current_term_ = term;
    voted_for_.reset();
  }
  if (role_ == RaftRole::Leader) reset_election_deadline();
  role_ = RaftRole::Follower;
  votes_.clear();
}

void RaftNode::become_candidate(std::vector<SimMessage>& out) {
  role_ = RaftRole::Candidate;
  ++current_term_;
  voted_for_ = id_;
  leader_id_.reset();
  votes_ = {id_};
  reset_election_deadline();
  if (votes_.size() >= quorum()) {
    become_leader(out);
    return;
  }
  for (const auto& peer : peers_) {
    out.push_back(SimMessage{id_, peer, RequestVote{current_term_, id_, last_index(), term_at(last_index())}, 0});
  }
}

void RaftNode::become_leader(std::vector<SimMessage>& out) {
  role_ = RaftRole::Leader;
  leader_id_ = id_;
  votes_.clear();
  for (const auto& peer : peers_) {
    next_index_[peer] = last_index() + 1;
    match_index_[peer] = 0;
  }
  log_.push_back(LogEntry{current_term_, now_, NoOp{}});
  advance_commit();
  broadcast_append(out);
  heartbeat_due_ = now_ + config_.heartbeat_interval;
}

bool RaftNode::log_up_to_date(std::uint64_t last_idx, std::uint64_t last_term) const {
  auto my_term = term_at(last_index());
  if (last_term != my_term) return last_term > my_term;
  return last_idx >= last_index();
}

void RaftNode::handle(const NodeId& from, const RequestVote& m, std::vector<SimMessage>& out) {
  bool grant = m.term == current_term_ && (!voted_for_ || *voted_for_ == m.candidate) &&
               log_up_to_date(m.last_log_index, m.last_log_term);
  if (grant) {
    voted_for_ = m.candidate;
    reset_election_deadline();
  }
  out.push_back(SimMessage{id_, from, VoteReply{current_term_, grant}, 0});
}

void RaftNode::handle(const NodeId& from, const VoteReply& m, std::vector<SimMessage>& out) {
  if (role_ != RaftRole::Candidate || m.term != current_term_ || !m.granted) return;
  votes_.insert(from);
  if (votes_.size() >= quorum()) become_leader(out);
}

void RaftNode::handle(const NodeId& from, const AppendEntries& m, std::vector<SimMessage>& out) {
  if (m.term < current_term_) {
    out.push_back(SimMessage{id_, from, AppendReply{current_term_, false, last_index()}, 0});
    return;
  }
  // Same term: a candidate steps down to the elected leader.
  role_ = RaftRole::Follower;
  votes_.clear();
  leader_id_ = m.leader;
  reset_election_deadline();

  if (m.prev_log_index > last_index()) {
    out.push_back(SimMessage{id_, from, AppendReply{current_term_, false, last_index()}, 0});
    return;
  }
  if (term_at(m.prev_log_index) != m.prev_log_term) {
    // Skip back over the whole conflicting term.
    auto conflict_term = term_at(m.prev_log_index);
    auto hint = m.prev_log_index - 1;
    while (hint > commit_index_ && term_at(hint) == conflict_term) --hint;
    out.push_back(SimMessage{id_, from, AppendReply{current_term_, false, hint}, 0});
    return;
  }

  auto index = m.prev_log_index;
  for (const auto& entry : m.entries) {
    ++index;
    if (index <= last_index()) {
      if (term_at(index) == entry.term) continue;
      log_.resize(index - 1);
    }
    log_.push_back(entry);
  }
  auto last_new = m.prev_log_index + m.entries.size();
  if (m.leader_commit > commit_index_) commit_index_ = std::max(commit_index_, std::min(m.leader_commit, last_new));
  out.push_back(SimMessage{id_, from, AppendReply{current_term_, true, last_new}, 0});
}

void RaftNode::handle(const NodeId& from, const AppendReply& m, std::vector<SimMessage>& out) {
  if (role_ != RaftRole::Leader || m.term != current_term_) return;
  if (m.success) {
    match_index_[from] = std::max(match_index_[from], m.match_index);
    next_index_[from] = match_index_[from] + 1;
    advance_commit();
    if (next_index_[from] <= last_index()) send_append(from, out);
  } else {
    next_index_[from] = std::max<std::uint64_t>(1, std::min(next_index_[from] - 1, m.match_index + 1));
    send_append(from, out);
  }
}

void RaftNode::send_append(const NodeId& peer, std::vector<SimMessage>& out) {
  AppendEntries ae;
  ae.term = current_term_;
  ae.leader = id_;
  auto next = next_index_[peer];
  ae.prev_log_index = next - 1;
  ae.prev_log_term = term_at(ae.prev_log_index);
  for (auto i = next; i <= last_index() && ae.entries.size() < config_.max_entries_per_append; ++i) {
    ae.entries.push_back(log_[i - 1]);
  }
  ae.leader_commit = commit_index_;
  out.push_back(SimMessage{id_, peer, std::move(ae), 0});
}

void RaftNode::broadcast_append(std::vector<SimMessage>& out) {
  for (const auto& peer : peers_) send_append(peer, out);
}

void RaftNode::advance_commit() {
  for (auto n = last_index(); n > commit_index_; --n) {
    if (term_at(n) != current_term_) break;
    std::size_t replicas = 1;
    for (const auto& [_, match] : match_index_) {
      if (match >= n) ++replicas;
    }
    if (replicas >= quorum()) {
      commit_index_ = n;
      break;
    }
  }
}

SubmitResult RaftNode::propose(EntryPayload payload, std::vector<SimMessage>& outbound) {
  if (role_ != RaftRole::Leader) return NotLeader{leader_id_};
  log_.push_back(LogEntry{current_term_, now_, std::move(payload)});
  advance_commit();
  for (const auto& peer : peers_) {
    // Peers already holding an in-flight batch pick this up on the reply.
    if (next_index_[peer] == last_index()) send_append(peer, outbound);
  }
  return Accepted{last_index()};
}

}  // namespace hl::ordering
