#include "healthledger/ordering/messages.hpp"

#include "healthledger/common/error.hpp"

namespace hl::ordering {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Json to_json(const LogEntry& entry) {
  Json payload = std::visit(
      overloaded{
          [](const ledger::Transaction& tx) { return Json{{"tx", tx.to_json()}, {"type", "tx"}}; },
          [](const NoOp&) { return Json{{"type", "noop"}}; },
          [](const CutMarker& m) {
            return Json{{"block_number", m.block_number}, {"first_index", m.first_index},
                        {"last_index", m.last_index},     {"signature", to_hex(m.signature)},
                        {"signer", m.signer},             {"timestamp", m.timestamp_ms},
                        {"type", "cut"}};
          },
      },
      entry.payload);
  return Json{{"payload", std::move(payload)}, {"received_at", entry.received_at_ms}, {"term", entry.term}};
}

LogEntry log_entry_from_json(const Json& j) {
  LogEntry e;
  e.term = require_uint(j, "term");
  e.received_at_ms = require_int(j, "received_at");
  const auto& p = require(j, "payload");
  auto type = require_string(p, "type");
  if (type == "tx") {
    e.payload = ledger::Transaction::from_json(require(p, "tx"));
  } else if (type == "noop") {
    e.payload = NoOp{};
  } else if (type == "cut") {
    CutMarker m;
    m.block_number = require_uint(p, "block_number");
    m.first_index = require_uint(p, "first_index");
    m.last_index = require_uint(p, "last_index");
    m.signature = from_hex(require_string(p, "signature"));
    m.signer = require_string(p, "signer");
    m.timestamp_ms = require_int(p, "timestamp");
    e.payload = std::move(m);
  } else {
    fail(ErrorKind::Validation, "unknown log entry type '" + type + "'");
  }
  return e;
}

Json to_json(const SimMessage& message) {
  Json body = std::visit(
      overloaded{
          [](const RequestVote& m) {
            return Json{{"candidate", m.candidate}, {"last_log_index", m.last_log_index},
                        {"last_log_term", m.last_log_term}, {"term", m.term}, {"type", "request_vote"}};
          },
          [](const VoteReply& m) { return Json{{"granted", m.granted}, {"term", m.term}, {"type", "vote_reply"}}; },
          [](const AppendEntries& m) {
            auto entries = Json::array();
            for (const auto& e : m.entries) entries.push_back(to_json(e));
            return Json{{"entries", std::move(entries)},   {"leader", m.leader},
                        {"leader_commit", m.leader_commit}, {"prev_log_index", m.prev_log_index},
                        {"prev_log_term", m.prev_log_term}, {"term", m.term},
                        {"type", "append_entries"}};
          },
          [](const AppendReply& m) {
            return Json{{"match_index", m.match_index}, {"success", m.success}, {"term", m.term},
                        {"type", "append_reply"}};
          },
      },
      message.payload);
  return Json{{"deliver_at", message.deliver_at}, {"from", message.from}, {"payload", std::move(body)},
              {"to", message.to}};
}

SimMessage message_from_json(const Json& j) {
  SimMessage m;
  m.deliver_at = require_int(j, "deliver_at");
  m.from = require_string(j, "from");
  m.to = require_string(j, "to");
  const auto& p = require(j, "payload");
  auto type = require_string(p, "type");
  if (type == "request_vote") {
    m.payload = RequestVote{require_uint(p, "term"), require_string(p, "candidate"), require_uint(p, "last_log_index"),
                            require_uint(p, "last_log_term")};
  } else if (type == "vote_reply") {
    m.payload = VoteReply{require_uint(p, "term"), require(p, "granted").get<bool>()};
  } else if (type == "append_entries") {
    AppendEntries ae;
    ae.term = require_uint(p, "term");
    ae.leader = require_string(p, "leader");
    ae.prev_log_index = require_uint(p, "prev_log_index");
    ae.prev_log_term = require_uint(p, "prev_log_term");
    ae.leader_commit = require_uint(p, "leader_commit");
    for (const auto& e : require(p, "entries")) ae.entries.push_back(log_entry_from_json(e));
    m.payload = std::move(ae);
  } else if (type == "append_reply") {
    m.payload = AppendReply{require_uint(p, "term"), require(p, "success").get<bool>(), require_uint(p, "match_index")};
  } else {
    fail(ErrorKind::Validation, "unknown message type '" + type + "'");
  }
  return m;
}

std::uint64_t message_term(const MessagePayload& payload) {
  return std::visit([](const auto& m) { return m.term; }, payload);
}

}  // namespace hl::ordering
