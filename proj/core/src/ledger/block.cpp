#include "healthledger/ledger/block.hpp"

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"

namespace hl::ledger {

Json BlockHeader::to_json() const {
  return Json{{"data_hash", data_hash.hex()},
              {"number", number},
              {"prev_hash", prev_hash.hex()},
              {"timestamp", timestamp_ms}};
}

BlockHeader BlockHeader::from_json(const Json& j) {
  BlockHeader h;
  h.data_hash = Digest256::from_hex(require_string(j, "data_hash"));
  h.number = require_uint(j, "number");
  h.prev_hash = Digest256::from_hex(require_string(j, "prev_hash"));
  h.timestamp_ms = require_int(j, "timestamp");
  return h;
}

std::string header_signing_payload(const BlockHeader& header) { return canonical_dump(header.to_json()); }

Digest256 compute_block_hash(const BlockHeader& header) { return crypto::sha256(header_signing_payload(header)); }

Digest256 compute_data_hash(const std::vector<Transaction>& transactions) {
  Bytes concatenated;
  concatenated.reserve(transactions.size() * Digest256::kSize);
  for (const auto& tx : transactions) {
    const auto& d = tx.digest().bytes();
    concatenated.insert(concatenated.end(), d.begin(), d.end());
  }
  return crypto::sha256(concatenated);
}

namespace {

std::string flags_to_string(const std::vector<TxValidity>& flags) {
  std::string s;
  s.reserve(flags.size());
  for (auto f : flags) s.push_back(static_cast<char>(f));
  return s;
}

}  // namespace

Json Block::to_json() const {
  auto txs = Json::array();
  for (const auto& tx : transactions) txs.push_back(tx.to_json());
  return Json{{"flags", flags_to_string(validity_flags)},
              {"header", header.to_json()},
              {"orderer_signature", to_hex(orderer_signature)},
              {"signer", signer},
              {"transactions", std::move(txs)}};
}

Block Block::from_json(const Json& j) {
  Block b;
  b.header = BlockHeader::from_json(require(j, "header"));
  for (const auto& tx : require(j, "transactions")) b.transactions.push_back(Transaction::from_json(tx));
  b.signer = require_string(j, "signer");
  b.orderer_signature = from_hex(require_string(j, "orderer_signature"));
  for (char c : require_string(j, "flags")) {
    if (c != 'V' && c != 'I') fail(ErrorKind::Validation, "validity flag must be V or I");
    b.validity_flags.push_back(static_cast<TxValidity>(c));
  }
  if (!b.validity_flags.empty() && b.validity_flags.size() != b.transactions.size()) {
    fail(ErrorKind::Validation, "validity flag count does not match transaction count");
  }
  return b;
}

std::string Block::encode() const { return canonical_dump(to_json()); }

Block Block::decode(std::string_view text) { return from_json(canonical_parse(text)); }

std::size_t Block::encoded_size() const { return encode().size(); }

std::size_t committed_size(const Block& block) {
  // Flags are one character per transaction whatever their value.
  auto flagged = block.validity_flags.empty() ? block.transactions.size() : 0;
  return block.encoded_size() + flagged;
}

Json ConsortiumConfig::to_json() const {
  auto orgs_json = Json::array();
  for (const auto& o : orgs) orgs_json.push_back(Json{{"name", o.name}, {"root_cert", o.root_cert.to_json()}});
  auto consenters_json = Json::array();
  for (const auto& c : consenters) consenters_json.push_back(Json{{"cert", c.cert.to_json()}, {"id", c.id}});
  return Json{{"channel", channel},
              {"consenters", std::move(consenters_json)},
              {"orderer_org", Json{{"name", orderer_org.name}, {"root_cert", orderer_org.root_cert.to_json()}}},
              {"orgs", std::move(orgs_json)}};
}

ConsortiumConfig ConsortiumConfig::from_json(const Json& j) {
  ConsortiumConfig c;
  c.channel = require_string(j, "channel");
  for (const auto& o : require(j, "orgs")) {
    c.orgs.push_back(OrgRoot{require_string(o, "name"), identity::Certificate::from_json(require(o, "root_cert"))});
  }
  const auto& ord = require(j, "orderer_org");
  c.orderer_org = OrgRoot{require_string(ord, "name"), identity::Certificate::from_json(require(ord, "root_cert"))};
  for (const auto& k : require(j, "consenters")) {
    c.consenters.push_back(Consenter{require_string(k, "id"), identity::Certificate::from_json(require(k, "cert"))});
  }
  return c;
}

Block create_genesis_block(const ConsortiumConfig& consortium) {
  if (consortium.orgs.empty()) fail(ErrorKind::EmptyConsortium, "consortium has no organizations");

  Transaction config_tx;
  config_tx.proposal.contract_fn = std::string(kGenesisConfigFn);
  config_tx.proposal.args = Json::array({consortium.to_json()});
  config_tx.proposal.invoker_cert = consortium.orderer_org.root_cert;
  config_tx.proposal.nonce = Bytes(16, 0);
  config_tx.proposal.created_at_ms = 0;
  config_tx.tx_id = compute_tx_id(config_tx.proposal);

  Block genesis;
  genesis.header.number = 0;
  genesis.header.prev_hash = Digest256::zero();
  genesis.header.timestamp_ms = 0;
  genesis.transactions.push_back(std::move(config_tx));
  genesis.header.data_hash = compute_data_hash(genesis.transactions);
  return genesis;
}

ConsortiumConfig genesis_config(const Block& genesis) {
  if (genesis.header.number != 0 || genesis.transactions.size() != 1 ||
      genesis.transactions[0].proposal.contract_fn != kGenesisConfigFn) {
    fail(ErrorKind::Validation, "not a genesis block");
  }
  const auto& args = genesis.transactions[0].proposal.args;
  if (args.size() != 1) fail(ErrorKind::Validation, "genesis config transaction must carry one argument");
  return ConsortiumConfig::from_json(args[0]);
}

}  // namespace hl::ledger
