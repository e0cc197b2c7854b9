#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"
#include "healthledger/identity/ca_server.hpp"
#include "healthledger/ledger/block_store.hpp"
#include "healthledger/ledger/validate.hpp"
#include "healthledger/ledger/world_state.hpp"
#include "support.hpp"

using namespace hl;
using namespace hl::ledger;

namespace {

// Genesis plus an orderer key able to sign follow-up blocks.
struct ChainKit {
  crypto::DeterministicRng rng{7};
  identity::CAServer org_ca = identity::CAServer::bootstrap("Org1", rng);
  identity::CAServer orderer_ca = identity::CAServer::bootstrap("OrdererOrg", rng);
  identity::HealthCard orderer = orderer_ca.issue_card("orderer0", identity::Role::Orderer, rng);
  identity::HealthCard member = org_ca.issue_card("alice", identity::Role::User, rng);
  Block genesis;

  ChainKit() {
    ConsortiumConfig c;
    c.orgs.push_back({"Org1", org_ca.root_cert()});
    c.orderer_org = {"OrdererOrg", orderer_ca.root_cert()};
    c.consenters.push_back({"orderer0", orderer.certificate});
    genesis = create_genesis_block(c);
  }

  Transaction tx(std::vector<ReadEntry> reads, std::vector<WriteEntry> writes, std::string tag = "") {
    Transaction t;
    t.proposal.contract_fn = "kv.put";
    t.proposal.args = Json::array({tag});
    t.proposal.invoker_cert = member.certificate;
    t.proposal.nonce = rng.bytes(16);
    t.tx_id = compute_tx_id(t.proposal);
    t.read_set = std::move(reads);
    t.write_set = std::move(writes);
    return t;
  }

  Block next(const Block& prev, std::vector<Transaction> txs, std::int64_t ts = 1000) {
    Block b;
    b.header.number = prev.header.number + 1;
    b.header.prev_hash = compute_block_hash(prev.header);
    b.header.timestamp_ms = ts;
    b.transactions = std::move(txs);
    b.header.data_hash = compute_data_hash(b.transactions);
    b.signer = "orderer0";
    b.orderer_signature = orderer.sign(as_bytes(header_signing_payload(b.header)));
    return b;
  }
};

}  // namespace

TEST_CASE("genesis block") {
  ChainKit kit;
  CHECK(kit.genesis.header.number == 0);
  CHECK(kit.genesis.header.prev_hash.is_zero());
  CHECK(kit.genesis.header.timestamp_ms == 0);
  auto config = genesis_config(kit.genesis);
  CHECK(config.orgs.size() == 1);
  CHECK(config.consenters.size() == 1);
  CHECK(config.channel == "healthcare");
  // Same consortium, same block hash.
  CHECK(compute_block_hash(create_genesis_block(config).header) == compute_block_hash(kit.genesis.header));
  CHECK_THROWS_AS(create_genesis_block(ConsortiumConfig{}), Error);
  try {
    create_genesis_block(ConsortiumConfig{});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyConsortium);
  }
}

TEST_CASE("block encoding round trips and is canonical") {
  ChainKit kit;
  auto b1 = kit.next(kit.genesis, {kit.tx({}, {{"kv/a", "1"}})});
  auto text = b1.encode();
  auto back = Block::decode(text);
  CHECK(back == b1);
  CHECK(back.encode() == text);
  CHECK(b1.encoded_size() == text.size());
  CHECK(committed_size(b1) == text.size() + 1);
  CHECK(verify_block_signature(b1, genesis_config(kit.genesis)));
  CHECK(links_to(b1, kit.genesis));
}

TEST_CASE("block store rejects bad appends") {
  ChainKit kit;
  BlockStore store;
  store.append(kit.genesis);
  auto b1 = kit.next(kit.genesis, {kit.tx({}, {{"kv/a", "1"}})});

  auto wrong_height = b1;
  wrong_height.header.number = 5;
  CHECK_THROWS_AS(store.append(wrong_height), Error);

  auto wrong_link = b1;
  wrong_link.header.prev_hash = Digest256::zero();
  try {
    store.append(wrong_link);
    FAIL("expected ChainLink");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ChainLink);
  }

  CHECK(store.append(b1) == 2);
  CHECK(append_block(store, kit.next(b1, {})) == 3);
}

TEST_CASE("block store enforces the 1 MB cap including flags") {
  ChainKit kit;
  BlockStore store;
  store.append(kit.genesis);
  auto big = kit.tx({}, {{"kv/big", std::string(kMaxBlockBytes, 'x')}});
  try {
    store.append(kit.next(kit.genesis, {big}));
    FAIL("expected Oversize");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Oversize);
  }
  CHECK(store.height() == 1);
}

TEST_CASE("file-backed store persists and reloads") {
  ChainKit kit;
  auto dir = testing::scratch_dir("store");
  auto file = dir / block_file_name(kChannel);
  {
    BlockStore store(file);
    store.append(kit.genesis);
    store.append(kit.next(kit.genesis, {kit.tx({}, {{"kv/a", "1"}})}));
  }
  BlockStore reloaded(file);
  CHECK(reloaded.height() == 2);
  CHECK(validate_chain(reloaded).valid);
  CHECK(reloaded.records() == read_block_records(file));
  std::filesystem::remove_all(dir);
}

TEST_CASE("MVCC: stale reads and replays are invalid, invalid writes nothing") {
  ChainKit kit;
  WorldState state;
  apply_block(kit.genesis, state);

  auto t1 = kit.tx({{"kv/a", std::nullopt}}, {{"kv/a", "1"}}, "t1");
  auto b1 = kit.next(kit.genesis, {t1});
  CHECK(apply_block(b1, state) == std::vector{TxValidity::Valid});
  CHECK(state.get("kv/a")->version == Version{1, 0});

  // Both read kv/a at version (1,0); only the first survives.
  auto t2 = kit.tx({{"kv/a", Version{1, 0}}}, {{"kv/a", "2"}}, "t2");
  auto t3 = kit.tx({{"kv/a", Version{1, 0}}}, {{"kv/a", "3"}, {"kv/b", "x"}}, "t3");
  auto b2 = kit.next(b1, {t2, t3, t1});
  CHECK(apply_block(b2, state) == std::vector{TxValidity::Valid, TxValidity::Invalid, TxValidity::Invalid});
  CHECK(state.get("kv/a")->value == "2");
  CHECK_FALSE(state.get("kv/b"));
  CHECK(state.height() == 3);

  // Tombstone.
  auto t4 = kit.tx({}, {{"kv/a", std::nullopt}}, "t4");
  apply_block(kit.next(b2, {t4}), state);
  CHECK_FALSE(state.get("kv/a"));
}

TEST_CASE("world state snapshot round trip") {
  ChainKit kit;
  WorldState state;
  apply_block(kit.genesis, state);
  apply_block(kit.next(kit.genesis, {kit.tx({}, {{"health/x/1", "{}"}, {"health/x/2", "{}"}, {"kv/z", "1"}})}),
              state);
  CHECK(state.scan("health/x/").size() == 2);
  auto dir = testing::scratch_dir("snap");
  auto path = dir / snapshot_file_name(kChannel);
  state.save_snapshot(path);
  CHECK(WorldState::load_snapshot(path) == state);
  CHECK(WorldState::from_json(state.to_json()) == state);
  std::filesystem::remove_all(dir);
}

TEST_CASE("validate_chain pinpoints the first bad height") {
  ChainKit kit;
  BlockStore store;
  store.append(kit.genesis);
  auto b1 = kit.next(kit.genesis, {kit.tx({}, {{"kv/a", "1"}})});
  store.append(b1);
  auto b2 = kit.next(b1, {kit.tx({{"kv/a", Version{1, 0}}}, {{"kv/a", "2"}})});
  store.append(b2);
  CHECK(validate_chain(store).valid);

  auto records = store.records();

  SUBCASE("data tampering") {
    auto r = records;
    auto pos = r[1].find("kv/a");
    r[1][pos + 3] = 'b';
    auto rep = validate_records(r);
    CHECK_FALSE(rep.valid);
    CHECK(rep.first_bad_height == 1);
  }
  SUBCASE("header re-signed by an outsider") {
    auto forged = b2;
    forged.header.timestamp_ms += 1;
    auto outsider = crypto::KeyPair::from_seed(Bytes(32, 9));
    forged.orderer_signature = outsider.sign(as_bytes(header_signing_payload(forged.header)));
    auto r = records;
    r[2] = forged.encode();
    auto rep = validate_records(r);
    CHECK(rep.first_bad_height == 2);
  }
  SUBCASE("flags disagree with replay") {
    auto flagged = b1;
    flagged.validity_flags = {TxValidity::Invalid};
    auto r = records;
    r[1] = flagged.encode();
    auto rep = validate_records(r);
    CHECK(rep.first_bad_height == 1);
  }
  SUBCASE("truncated tail") {
    auto rep = validate_records(records, true);
    CHECK(rep.first_bad_height == 3);
  }
  SUBCASE("non-canonical whitespace") {
    auto r = records;
    r[2] = " " + r[2];
    CHECK(validate_records(r).first_bad_height == 2);
  }
}
