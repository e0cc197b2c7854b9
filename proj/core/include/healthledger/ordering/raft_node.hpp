#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <variant>
#include <vector>

#include "healthledger/ordering/messages.hpp"

namespace hl::ordering {

enum class RaftRole { Follower, Candidate, Leader };

struct RaftConfig {
  std::int64_t election_timeout_min = 150;
  std::int64_t election_timeout_max = 300;
  std::int64_t heartbeat_interval = 50;
  std::size_t max_entries_per_append = 64;
};

struct Accepted {
  std::uint64_t index = 0;
};
struct NotLeader {
  std::optional<NodeId> hint;
};
using SubmitResult = std::variant<Accepted, NotLeader>;

/// One Raft participant. All state is explicit and the election-timeout
/// generator is seeded, so feeding the same events reproduces the same
/// transitions. Log indices are 1-based; index 0 is an empty sentinel.
class RaftNode {
 public:
  RaftNode(NodeId id, std::vector<NodeId> peers, std::uint64_t seed, RaftConfig config = {});

  // Pure transition: applies one event, returns messages to send.
  std::vector<SimMessage> step(const Event& event);
  // Advances the logical clock and fires ElectionTimeout / Heartbeat when due.
  std::vector<SimMessage> tick(std::int64_t now);

  // Leader only. Appends `payload` in the current term and starts
  // replicating it. Followers answer NotLeader with the last known leader.
  SubmitResult propose(EntryPayload payload, std::vector<SimMessage>& outbound);

  const NodeId& id() const { return id_; }
  const std::vector<NodeId>& peers() const { return peers_; }
  RaftRole role() const { return role_; }
  std::uint64_t current_term() const { return current_term_; }
  const std::optional<NodeId>& voted_for() const { return voted_for_; }
  const std::optional<NodeId>& leader_hint() const { return leader_id_; }
  std::uint64_t commit_index() const { return commit_index_; }
  std::uint64_t last_index() const { return log_.size(); }
  std::uint64_t term_at(std::uint64_t index) const;
  const LogEntry& entry(std::uint64_t index) const { return log_.at(index - 1); }
  const std::vector<LogEntry>& log() const { return log_; }
  std::int64_t now() const { return now_; }
  std::size_t quorum() const { return (peers_.size() + 1) / 2 + 1; }

 private:
  void become_follower(std::uint64_t term);
  void become_candidate(std::vector<SimMessage>& out);
  void become_leader(std::vector<SimMessage>& out);
  void reset_election_deadline();
  void send_append(const NodeId& peer, std::vector<SimMessage>& out);
  void broadcast_append(std::vector<SimMessage>& out);
  void advance_commit();
  bool log_up_to_date(std::uint64_t last_index, std::uint64_t last_term) const;

  void handle(const NodeId& from, const RequestVote& m, std::vector<SimMessage>& out);
  void handle(const NodeId& from, const VoteReply& m, std::vector<SimMessage>& out);
  void handle(const NodeId& from, const AppendEntries& m, std::vector<SimMessage>& out);
  void handle(const NodeId& from, const AppendReply& m, std::vector<SimMessage>& out);

  NodeId id_;
  std::vector<NodeId> peers_;
  RaftConfig config_;
  std::mt19937_64 rng_;

  std::uint64_t current_term_ = 0;
  std::optional<NodeId> voted_for_;
  RaftRole role_ = RaftRole::Follower;
  std::optional<NodeId> leader_id_;
  std::vector<LogEntry> log_;
  std::uint64_t commit_index_ = 0;

  std::set<NodeId> votes_;
  std::map<NodeId, std::uint64_t> next_index_;
  std::map<NodeId, std::uint64_t> match_index_;

  std::int64_t now_ = 0;
  std::int64_t election_deadline_ = 0;
  std::int64_t heartbeat_due_ = 0;
};

}  // namespace hl::ordering
