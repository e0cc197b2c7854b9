#include "healthledger/gateway/peer.hpp"

#include "healthledger/chaincode/contracts.hpp"
#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"
#include "healthledger/ledger/validate.hpp"

namespace hl::gateway {

ledger::Proposal make_proposal(const identity::HealthCard& card, std::string fn, Json args, Bytes nonce,
                               std::int64_t created_at_ms) {
  ledger::Proposal p;
  p.contract_fn = std::move(fn);
  p.args = std::move(args);
  p.invoker_cert = card.certificate;
  p.nonce = std::move(nonce);
  p.created_at_ms = created_at_ms;
  p.client_signature = card.sign(as_bytes(canonical_dump(p.signed_body())));
  return p;
}

void verify_proposal(const ledger::Proposal& proposal) {
  if (proposal.nonce.size() != 16) fail(ErrorKind::InvalidSignature, "proposal nonce must be 16 bytes");
  auto body = canonical_dump(proposal.signed_body());
  if (!crypto::verify(proposal.invoker_cert.public_key, as_bytes(body), proposal.client_signature)) {
    fail(ErrorKind::InvalidSignature, "client signature does not verify");
  }
}

std::string endorsement_payload(const Digest256& tx_id, const Digest256& response_digest) {
  return tx_id.hex() + ":" + response_digest.hex();
}

bool verify_endorsement(const ledger::Endorsement& e, const ledger::Transaction& tx, const Msp& msp) {
  if (e.endorser_cert.role != identity::Role::Peer) return false;
  if (!msp.is_member_of(e.endorser_cert, e.endorser_cert.org)) return false;
  auto payload = endorsement_payload(tx.tx_id, e.response_digest);
  return crypto::verify(e.endorser_cert.public_key, as_bytes(payload), e.signature);
}

// ---- CommittingPeer ------------------------------------------------------------

CommittingPeer::CommittingPeer(std::string id, std::string org, const ledger::Block& genesis,
                               std::optional<std::filesystem::path> data_dir)
    : id_(std::move(id)), org_(std::move(org)), consortium_(ledger::genesis_config(genesis)),
      data_dir_(std::move(data_dir)) {
  if (data_dir_) {
    std::filesystem::create_directories(*data_dir_);
    chain_ = ledger::BlockStore(*data_dir_ / ledger::block_file_name(consortium_.channel));
  }
  if (chain_.empty()) {
    chain_.append(genesis);
    ledger::apply_block(genesis, state_);
    return;
  }
  auto report = ledger::validate_chain(chain_);
  if (!report.valid) {
    fail(ErrorKind::ChainLink, "stored chain invalid at height " + std::to_string(report.first_bad_height.value_or(0)) + ": " +
                                   report.reason);
  }
  if (chain_.at(0) != genesis) fail(ErrorKind::ChainLink, "stored chain has a different genesis block");
  for (const auto& block : chain_.blocks()) {
    auto flags = ledger::apply_block(block, state_);
    for (std::size_t i = 0; i < flags.size(); ++i) {
      CommitReceipt r{block.header.number, static_cast<std::uint32_t>(i), flags[i] == ledger::TxValidity::Valid};
      auto [it, inserted] = receipts_.try_emplace(block.transactions[i].tx_id, r);
      if (!inserted && !it->second.valid && r.valid) it->second = r;
    }
  }
}

std::vector<ledger::TxValidity> CommittingPeer::commit(const ledger::Block& block) {
  if (block.header.number != chain_.height()) {
    fail(ErrorKind::Height, "block " + std::to_string(block.header.number) + " does not follow height " +
                                std::to_string(chain_.height()));
  }
  if (!ledger::links_to(block, chain_.tip())) fail(ErrorKind::ChainLink, "block does not link to the local tip");
  if (!ledger::verify_block_signature(block, consortium_)) {
    fail(ErrorKind::InvalidSignature, "block is not signed by a consenter");
  }

  auto [next_state, flags] = ledger::commit_block(block, state_);
  if (!block.validity_flags.empty() && block.validity_flags != flags) {
    fail(ErrorKind::ChainLink, "block validity flags disagree with local validation");
  }
  auto committed = block;
  committed.validity_flags = flags;
  chain_.append(committed);
  state_ = std::move(next_state);
  for (std::size_t i = 0; i < flags.size(); ++i) {
    CommitReceipt r{block.header.number, static_cast<std::uint32_t>(i), flags[i] == ledger::TxValidity::Valid};
    // A later copy of a tx only replaces an earlier invalid one.
    auto [it, inserted] = receipts_.try_emplace(block.transactions[i].tx_id, r);
    if (!inserted && !it->second.valid && r.valid) it->second = r;
  }
  if (data_dir_) state_.save_snapshot(*data_dir_ / ledger::snapshot_file_name(consortium_.channel));
  return flags;
}

std::optional<CommitReceipt> CommittingPeer::receipt(const Digest256& tx_id) const {
  auto it = receipts_.find(tx_id);
  if (it == receipts_.end()) return std::nullopt;
  return it->second;
}

// ---- AnchorPeer ------------------------------------------------------------------

AnchorPeer::AnchorPeer(std::string id, identity::HealthCard peer_card, const ledger::Block& genesis,
                       std::shared_ptr<const Msp> msp, std::optional<std::filesystem::path> data_dir)
    : CommittingPeer(std::move(id), peer_card.org, genesis, std::move(data_dir)),
      card_(std::move(peer_card)),
      msp_(std::move(msp)) {}

Endorsed AnchorPeer::endorse(const ledger::Proposal& proposal) const {
  verify_proposal(proposal);
  auto invoker = msp_->resolve(proposal.invoker_cert);
  auto tx_id = ledger::compute_tx_id(proposal);

  chaincode::TxContext ctx(state(), invoker, tx_id, proposal.created_at_ms);
  auto result = chaincode::invoke(proposal.contract_fn, ctx, proposal.args);

  Endorsed out;
  out.tx.tx_id = tx_id;
  out.tx.proposal = proposal;
  out.tx.read_set = ctx.read_set();
  out.tx.write_set = ctx.write_set();
  ledger::Endorsement e;
  e.endorser_cert = card_.certificate;
  e.response_digest = ledger::response_digest(out.tx.read_set, out.tx.write_set, result);
  e.signature = card_.sign(as_bytes(endorsement_payload(tx_id, e.response_digest)));
  out.tx.endorsements.push_back(std::move(e));
  out.result = std::move(result);
  return out;
}

Json AnchorPeer::query(const ledger::Proposal& proposal) const {
  verify_proposal(proposal);
  auto invoker = msp_->resolve(proposal.invoker_cert);
  chaincode::TxContext ctx(state(), invoker, ledger::compute_tx_id(proposal), proposal.created_at_ms);
  return chaincode::invoke(proposal.contract_fn, ctx, proposal.args);
}

}  // namespace hl::gateway
