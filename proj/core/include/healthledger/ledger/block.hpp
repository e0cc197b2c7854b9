#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "healthledger/common/bytes.hpp"
#include "healthledger/common/canonical.hpp"
#include "healthledger/identity/certificate.hpp"
#include "healthledger/ledger/transaction.hpp"

namespace hl::ledger {

inline constexpr std::size_t kMaxBlockBytes = 1'048'576;
inline constexpr std::string_view kChannel = "healthcare";
inline constexpr std::string_view kGenesisConfigFn = "_config.genesis";

struct BlockHeader {
  std::uint64_t number = 0;
  Digest256 prev_hash;
  Digest256 data_hash;
  std::int64_t timestamp_ms = 0;

  Json to_json() const;
  static BlockHeader from_json(const Json& j);

  bool operator==(const BlockHeader&) const = default;
};

enum class TxValidity : char { Valid = 'V', Invalid = 'I' };

struct Block {
  BlockHeader header;
  std::vector<Transaction> transactions;
  // Orderer node that cut the block; empty for genesis.
  std::string signer;
  Bytes orderer_signature;
  // Empty until a peer commits the block; then one entry per transaction.
  std::vector<TxValidity> validity_flags;

  Json to_json() const;
  static Block from_json(const Json& j);
  std::string encode() const;
  static Block decode(std::string_view text);
  std::size_t encoded_size() const;

  bool operator==(const Block&) const = default;
};

Digest256 compute_block_hash(const BlockHeader& header);
Digest256 compute_data_hash(const std::vector<Transaction>& transactions);

// Encoded size the block will have once validity flags are attached. The
// size cap is enforced against this figure so that commit cannot push a
// block over the limit.
std::size_t committed_size(const Block& block);

struct OrgRoot {
  std::string name;
  identity::Certificate root_cert;
};

struct Consenter {
  std::string id;
  identity::Certificate cert;
};

struct ConsortiumConfig {
  std::string channel{kChannel};
  std::vector<OrgRoot> orgs;
  OrgRoot orderer_org;
  // Orderer node certificates; block signatures are checked against these.
  std::vector<Consenter> consenters;

  Json to_json() const;
  static ConsortiumConfig from_json(const Json& j);
};

Block create_genesis_block(const ConsortiumConfig& consortium);
// Reads the consortium back out of a genesis block.
ConsortiumConfig genesis_config(const Block& genesis);

// Bytes the ordering leader signs: the canonical header encoding.
std::string header_signing_payload(const BlockHeader& header);

}  // namespace hl::ledger
