#include <doctest.h>

#include <filesystem>

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"
#include "healthledger/gateway/doc_store.hpp"
#include "healthledger/gateway/peer.hpp"
#include "support.hpp"

using namespace hl;
using namespace hl::testing;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("bootstrap commits admin records once") {
  SimHarness h;
  CHECK(h.admin_tokens.size() == 3);
  CHECK(kind_of([&] { h.gateway.bootstrap(); }) == ErrorKind::AlreadyBootstrapped);
  for (const auto& org : h.topo.orgs) {
    CHECK(h.network.anchor(org.name).state().get("identity/" + org.name + "/admin@" + org.name));
  }
  CHECK(h.gateway.chain_height() >= 2);
}

TEST_CASE("login outcomes through the gateway") {
  SimHarness h;
  h.enroll(kNagorikOrg, "rahim", "pw1");
  CHECK(kind_of([&] { h.gateway.login("ghost", "pw1"); }) == ErrorKind::InvalidIdentity);
  CHECK(kind_of([&] { h.gateway.login("rahim", "nope"); }) == ErrorKind::InvalidPassword);
  auto s = h.gateway.login("rahim", "pw1");
  CHECK(s.stakeholder == chaincode::Stakeholder::Nagorik);
  CHECK(s.org == kNagorikOrg);
  CHECK(h.gateway.session(s.token).identity_id == "rahim");
  h.gateway.logout(s.token);
  CHECK(kind_of([&] { h.gateway.session(s.token); }) == ErrorKind::SessionExpired);
}

TEST_CASE("idle sessions expire") {
  gateway::GatewayOptions opts;
  opts.session_idle_ms = 1'000;
  SimHarness h("paper", {}, opts);
  auto token = h.enroll(kNagorikOrg, "karim");
  h.network.run_for(500);
  CHECK_NOTHROW(h.gateway.session(token));
  h.network.run_for(1'001);
  CHECK(kind_of([&] { h.gateway.session(token); }) == ErrorKind::SessionExpired);
}

TEST_CASE("only admins register, and ids are unique") {
  SimHarness h;
  auto user = h.enroll(kNagorikOrg, "u1");
  CHECK(kind_of([&] {
          h.gateway.register_user(user, {"u2", "U2", Json::object()}, identity::Role::User, "pw");
        }) == ErrorKind::Authorization);
  CHECK(kind_of([&] { h.enroll(kNagorikOrg, "u1"); }) == ErrorKind::DuplicateIdentity);
  CHECK_FALSE(h.gateway.wallet().contains("u2"));
  // Registered under the admin's org.
  CHECK(h.card("u1").org == kNagorikOrg);
}

TEST_CASE("transactions return receipts, queries do not") {
  SimHarness h;
  auto doc = h.enroll(kDoctorOrg, "dr.x");
  auto before = h.gateway.chain_height();
  auto r = h.call(doc, "health.register_doctor", Json::array({Json{{"name", "X"}, {"specialty", "eye"}}}));
  REQUIRE(r.receipt);
  CHECK(r.receipt->valid);
  CHECK(r.receipt->block_number >= before);
  auto q = h.call(doc, "health.get_doctor", Json::array({"dr.x"}));
  CHECK_FALSE(q.receipt);
  CHECK(q.result["status"] == "pending");
  CHECK(h.gateway.chain_height() == r.receipt->block_number + 1);
  CHECK(kind_of([&] { h.call(doc, "health.add_medicine", Json::array({Json::object()})); }) ==
        ErrorKind::Authorization);
}

TEST_CASE("all-orgs endorsement policy") {
  gateway::GatewayOptions opts;
  opts.policy = gateway::EndorsementPolicy::AllOrgs;
  SimHarness h("paper", {}, opts);
  auto n = h.enroll(kNagorikOrg, "n1");
  auto r = h.call(n, "health.file_complaint", Json::array({"s", "b", "low"}));
  REQUIRE(r.receipt);
  const auto& block = h.network.anchor(kNagorikOrg).chain().at(r.receipt->block_number);
  CHECK(block.transactions[r.receipt->tx_index].endorsements.size() == 3);

  h.network.kill(net::anchor_id(kDoctorOrg));
  CHECK(kind_of([&] { h.call(n, "health.file_complaint", Json::array({"s", "b", "low"})); }) ==
        ErrorKind::PolicyUnsatisfied);
}

TEST_CASE("endorsements are verified") {
  SimHarness h;
  auto admin = h.network.default_admin(kNagorikOrg);
  auto p = gateway::make_proposal(admin, "kv.put", Json::array({"k", "v"}), Bytes(16, 3), 0);
  auto e = h.network.anchor(kNagorikOrg).endorse(p);
  const auto& msp = *h.network.msp();
  REQUIRE(e.tx.endorsements.size() == 1);
  CHECK(gateway::verify_endorsement(e.tx.endorsements[0], e.tx, msp));
  auto forged = e.tx;
  forged.endorsements[0].response_digest = crypto::sha256("other");
  CHECK_FALSE(gateway::verify_endorsement(forged.endorsements[0], forged, msp));

  auto bad = p;
  bad.args = Json::array({"k", "w"});
  CHECK(kind_of([&] { h.network.anchor(kNagorikOrg).endorse(bad); }) == ErrorKind::InvalidSignature);
  auto short_nonce = gateway::make_proposal(admin, "kv.put", Json::array({"k", "v"}), Bytes(4, 3), 0);
  CHECK(kind_of([&] { gateway::verify_proposal(short_nonce); }) == ErrorKind::InvalidSignature);

  // A card from a CA outside the consortium.
  crypto::DeterministicRng rng(1);
  auto rogue = identity::CAServer::bootstrap(kNagorikOrg, rng);
  auto card = rogue.issue_card("mallory", identity::Role::User, rng);
  auto rp = gateway::make_proposal(card, "health.get_news", Json::array(), Bytes(16, 1), 0);
  CHECK(kind_of([&] { h.network.anchor(kNagorikOrg).endorse(rp); }) == ErrorKind::InvalidIdentity);
}

TEST_CASE("no quorum in the two-orderer topology: submissions time out") {
  gateway::GatewayOptions opts;
  opts.commit_timeout_ms = 3'000;
  SimHarness h("paper", {}, opts);
  auto n = h.enroll(kNagorikOrg, "n1");
  auto height = h.gateway.chain_height();
  h.network.kill(h.network.orderer_ids().front());
  CHECK(kind_of([&] { h.call(n, "health.file_complaint", Json::array({"s", "b", "low"})); }) == ErrorKind::Timeout);
  h.network.run_for(5'000);
  CHECK(h.gateway.chain_height() == height);
}

TEST_CASE("document store") {
  gateway::DocStore store(16);
  auto d = store.put(Bytes{1, 2, 3}, "application/octet-stream");
  CHECK(d == crypto::sha256(ByteView(Bytes{1, 2, 3})));
  CHECK(store.put(Bytes{1, 2, 3}, "application/octet-stream") == d);
  CHECK(store.size() == 1);
  CHECK(store.get(d).content == Bytes{1, 2, 3});
  CHECK(kind_of([&] { store.put(Bytes(17, 0), "x"); }) == ErrorKind::SizeLimit);
  CHECK(kind_of([&] { store.get(crypto::sha256("missing")); }) == ErrorKind::NotFound);

  auto dir = scratch_dir("docs");
  {
    gateway::DocStore disk(dir);
    disk.put(Bytes{9}, "text/plain");
  }
  gateway::DocStore reloaded(dir);
  CHECK(reloaded.contains(crypto::sha256(ByteView(Bytes{9}))));
  CHECK(reloaded.get(crypto::sha256(ByteView(Bytes{9}))).media_type == "text/plain");
  std::filesystem::remove_all(dir);
}

TEST_CASE("documents through the gateway need a session") {
  SimHarness h;
  auto t = h.enroll(kNagorikOrg, "n1");
  auto d = h.gateway.put_document(t, Bytes{4, 5}, "image/png");
  CHECK(h.gateway.get_document(t, d).media_type == "image/png");
  CHECK(kind_of([&] { h.gateway.get_document("bogus", d); }) == ErrorKind::SessionExpired);
}
