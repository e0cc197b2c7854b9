#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "healthledger/common/bytes.hpp"
#include "healthledger/common/canonical.hpp"
#include "healthledger/identity/certificate.hpp"

namespace hl::ledger {

/// Position of the write that produced a value: (block number, tx index).
struct Version {
  std::uint64_t block = 0;
  std::uint32_t tx_index = 0;

  auto operator<=>(const Version&) const = default;
};

Json version_to_json(const std::optional<Version>& v);
std::optional<Version> version_from_json(const Json& j);

struct ReadEntry {
  std::string key;
  // nullopt records that the key was absent when read.
  std::optional<Version> version;

  bool operator==(const ReadEntry&) const = default;
};

struct WriteEntry {
  std::string key;
  // nullopt is a tombstone.
  std::optional<std::string> value;

  bool operator==(const WriteEntry&) const = default;
};

/// Client request to run a contract function. Signed by the invoker over
/// (fn, args, nonce, created_at_ms).
struct Proposal {
  std::string contract_fn;
  Json args = Json::array();
  identity::Certificate invoker_cert;
  Bytes client_signature;
  Bytes nonce;  // 16 bytes
  std::int64_t created_at_ms = 0;

  Json signed_body() const;
  Json to_json() const;
  static Proposal from_json(const Json& j);

  bool operator==(const Proposal&) const = default;
};

Digest256 compute_tx_id(const Proposal& proposal);

struct Endorsement {
  identity::Certificate endorser_cert;
  Digest256 response_digest;
  Bytes signature;

  Json to_json() const;
  static Endorsement from_json(const Json& j);

  bool operator==(const Endorsement&) const = default;
};

struct Transaction {
  Digest256 tx_id;
  Proposal proposal;
  std::vector<Endorsement> endorsements;
  std::vector<ReadEntry> read_set;
  std::vector<WriteEntry> write_set;

  Json to_json() const;
  static Transaction from_json(const Json& j);

  // SHA-256 over the canonical encoding of the whole transaction.
  Digest256 digest() const;
  std::size_t encoded_size() const;

  bool operator==(const Transaction&) const = default;
};

// Digest over (read_set, write_set, result) that endorsers sign.
Digest256 response_digest(const std::vector<ReadEntry>& reads, const std::vector<WriteEntry>& writes,
                          const Json& result);

}  // namespace hl::ledger
