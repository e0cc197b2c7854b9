#include "healthledger/ledger/transaction.hpp"

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"

namespace hl::ledger {

Json version_to_json(const std::optional<Version>& v) {
  if (!v) return nullptr;
  return Json::array({v->block, v->tx_index});
}

std::optional<Version> version_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::Validation, "version must be [block, tx_index]");
  return Version{j[0].get<std::uint64_t>(), j[1].get<std::uint32_t>()};
}

Json Proposal::signed_body() const {
  return Json{{"args", args}, {"contract_fn", contract_fn}, {"created_at_ms", created_at_ms}, {"nonce", to_hex(nonce)}};
}

Json Proposal::to_json() const {
  auto j = signed_body();
  j["client_signature"] = to_hex(client_signature);
  j["invoker_cert"] = invoker_cert.to_json();
  return j;
}

Proposal Proposal::from_json(const Json& j) {
  Proposal p;
  p.args = require(j, "args");
  if (!p.args.is_array()) fail(ErrorKind::Validation, "proposal args must be an array");
  p.contract_fn = require_string(j, "contract_fn");
  p.created_at_ms = require_int(j, "created_at_ms");
  p.nonce = from_hex(require_string(j, "nonce"));
  p.client_signature = from_hex(require_string(j, "client_signature"));
  p.invoker_cert = identity::Certificate::from_json(require(j, "invoker_cert"));
  return p;
}

Digest256 compute_tx_id(const Proposal& proposal) { return digest_of(proposal.to_json()); }

Json Endorsement::to_json() const {
  return Json{{"endorser_cert", endorser_cert.to_json()},
              {"response_digest", response_digest.hex()},
              {"signature", to_hex(signature)}};
}

Endorsement Endorsement::from_json(const Json& j) {
  Endorsement e;
  e.endorser_cert = identity::Certificate::from_json(require(j, "endorser_cert"));
  e.response_digest = Digest256::from_hex(require_string(j, "response_digest"));
  e.signature = from_hex(require_string(j, "signature"));
  return e;
}

namespace {

Json reads_to_json(const std::vector<ReadEntry>& reads) {
  auto arr = Json::array();
  for (const auto& r : reads) arr.push_back(Json{{"key", r.key}, {"version", version_to_json(r.version)}});
  return arr;
}

Json writes_to_json(const std::vector<WriteEntry>& writes) {
  auto arr = Json::array();
  for (const auto& w : writes) {
    arr.push_back(Json{{"key", w.key}, {"value", w.value ? Json(*w.value) : Json(nullptr)}});
  }
  return arr;
}

}  // namespace

Json Transaction::to_json() const {
  auto endorsements_json = Json::array();
  for (const auto& e : endorsements) endorsements_json.push_back(e.to_json());
  return Json{{"endorsements", std::move(endorsements_json)},
              {"proposal", proposal.to_json()},
              {"read_set", reads_to_json(read_set)},
              {"tx_id", tx_id.hex()},
              {"write_set", writes_to_json(write_set)}};
}

Transaction Transaction::from_json(const Json& j) {
  Transaction tx;
  tx.tx_id = Digest256::from_hex(require_string(j, "tx_id"));
  tx.proposal = Proposal::from_json(require(j, "proposal"));
  for (const auto& e : require(j, "endorsements")) tx.endorsements.push_back(Endorsement::from_json(e));
  for (const auto& r : require(j, "read_set")) {
    tx.read_set.push_back(ReadEntry{require_string(r, "key"), version_from_json(require(r, "version"))});
  }
  for (const auto& w : require(j, "write_set")) {
    const auto& v = require(w, "value");
    if (!v.is_null() && !v.is_string()) fail(ErrorKind::Validation, "write value must be a string or null");
    tx.write_set.push_back(
        WriteEntry{require_string(w, "key"), v.is_null() ? std::nullopt : std::optional<std::string>(v.get<std::string>())});
  }
  return tx;
}

Digest256 Transaction::digest() const { return digest_of(to_json()); }

std::size_t Transaction::encoded_size() const { return canonical_dump(to_json()).size(); }

Digest256 response_digest(const std::vector<ReadEntry>& reads, const std::vector<WriteEntry>& writes,
                          const Json& result) {
  return digest_of(Json{{"read_set", reads_to_json(reads)}, {"result", result}, {"write_set", writes_to_json(writes)}});
}

}  // namespace hl::ledger
