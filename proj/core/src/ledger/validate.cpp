#include "healthledger/ledger/validate.hpp"

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"

namespace hl::ledger {

bool links_to(const Block& block, const Block& previous) {
  return block.header.number == previous.header.number + 1 &&
         block.header.prev_hash == compute_block_hash(previous.header) &&
         block.header.data_hash == compute_data_hash(block.transactions);
}

bool verify_block_signature(const Block& block, const ConsortiumConfig& consortium) {
  for (const auto& consenter : consortium.consenters) {
    if (consenter.id != block.signer) continue;
    if (!identity::verify_certificate(consenter.cert, consortium.orderer_org.root_cert.public_key)) return false;
    auto payload = header_signing_payload(block.header);
    return crypto::verify(consenter.cert.public_key, as_bytes(payload), block.orderer_signature);
  }
  return false;
}

ValidationReport validate_records(const std::vector<std::string>& records, bool truncated) {
  auto bad = [](std::uint64_t height, std::string reason) {
    return ValidationReport{false, height, std::move(reason)};
  };

  WorldState state;
  std::optional<ConsortiumConfig> consortium;
  std::optional<Block> previous;

  for (std::uint64_t i = 0; i < records.size(); ++i) {
    Block block;
    try {
      block = Block::decode(records[i]);
    } catch (const Error& e) {
      return bad(i, std::string("unreadable record: ") + e.what());
    }
    if (block.encode() != records[i]) return bad(i, "record is not in canonical form");
    if (block.header.number != i) return bad(i, "block number does not match position");
    if (block.header.data_hash != compute_data_hash(block.transactions)) return bad(i, "data_hash mismatch");

    if (i == 0) {
      if (!block.header.prev_hash.is_zero()) return bad(0, "genesis prev_hash is not zero");
      if (block.header.timestamp_ms != 0 || !block.signer.empty() || !block.orderer_signature.empty()) {
        return bad(0, "genesis carries fields it must not");
      }
      try {
        consortium = genesis_config(block);
      } catch (const Error& e) {
        return bad(0, std::string("bad genesis config: ") + e.what());
      }
    } else {
      if (block.header.prev_hash != compute_block_hash(previous->header)) return bad(i, "prev_hash link broken");
      if (!verify_block_signature(block, *consortium)) return bad(i, "orderer signature invalid");
    }

    auto flags = apply_block(block, state);
    if (!block.validity_flags.empty() && block.validity_flags != flags) {
      return bad(i, "stored validity flags disagree with replay");
    }
    previous = std::move(block);
  }
  if (truncated) return bad(records.size(), "trailing partial record");
  return {};
}

ValidationReport validate_chain(const BlockStore& store) {
  return validate_records(store.records(), store.truncated());
}

WorldState replay(const BlockStore& store) {
  WorldState state;
  for (const auto& block : store.blocks()) apply_block(block, state);
  return state;
}

}  // namespace hl::ledger
