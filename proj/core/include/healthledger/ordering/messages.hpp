#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "healthledger/common/canonical.hpp"
#include "healthledger/ledger/transaction.hpp"

namespace hl::ordering {

using NodeId = std::string;

// First entry of every leader term; lets the leader commit entries carried
// over from earlier terms.
struct NoOp {
  bool operator==(const NoOp&) const = default;
};

/// Decision by a leader to turn the log range [first_index, last_index]
/// into block `block_number`. Every orderer materializes the same block once
/// the marker commits.
struct CutMarker {
  std::uint64_t block_number = 0;
  std::uint64_t first_index = 0;
  std::uint64_t last_index = 0;
  std::int64_t timestamp_ms = 0;
  std::string signer;
  Bytes signature;

  bool operator==(const CutMarker&) const = default;
};

using EntryPayload = std::variant<ledger::Transaction, NoOp, CutMarker>;

struct LogEntry {
  std::uint64_t term = 0;
  std::int64_t received_at_ms = 0;
  EntryPayload payload;

  bool operator==(const LogEntry&) const = default;
};

struct RequestVote {
  std::uint64_t term = 0;
  NodeId candidate;
  std::uint64_t last_log_index = 0;
  std::uint64_t last_log_term = 0;

  bool operator==(const RequestVote&) const = default;
};

struct VoteReply {
  std::uint64_t term = 0;
  bool granted = false;

  bool operator==(const VoteReply&) const = default;
};

struct AppendEntries {
  std::uint64_t term = 0;
  NodeId leader;
  std::uint64_t prev_log_index = 0;
  std::uint64_t prev_log_term = 0;
  std::vector<LogEntry> entries;
  std::uint64_t leader_commit = 0;

  bool operator==(const AppendEntries&) const = default;
};

struct AppendReply {
  std::uint64_t term = 0;
  bool success = false;
  // On success: highest index known to match. On failure: a hint for the
  // leader's next probe.
  std::uint64_t match_index = 0;

  bool operator==(const AppendReply&) const = default;
};

using MessagePayload = std::variant<RequestVote, VoteReply, AppendEntries, AppendReply>;

struct SimMessage {
  NodeId from;
  NodeId to;
  MessagePayload payload;
  std::int64_t deliver_at = 0;

  bool operator==(const SimMessage&) const = default;
};

struct ElectionTimeout {};
struct Heartbeat {};

using Event = std::variant<SimMessage, ElectionTimeout, Heartbeat>;

Json to_json(const LogEntry& entry);
LogEntry log_entry_from_json(const Json& j);
Json to_json(const SimMessage& message);
SimMessage message_from_json(const Json& j);

std::uint64_t message_term(const MessagePayload& payload);

}  // namespace hl::ordering
