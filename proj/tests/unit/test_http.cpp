#include <doctest.h>
#include <httplib.h>

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"
#include "support.hpp"

using namespace hl;
using namespace hl::testing;

namespace {

struct Client {
  httplib::Client http;
  std::string token;

  explicit Client(const LiveStack& s) : http("127.0.0.1", s.port) { http.set_read_timeout(30, 0); }

  httplib::Headers auth() const {
    if (token.empty()) return {};
    return {{"Authorization", "Bearer " + token}};
  }

  std::pair<int, Json> post(const std::string& path, const Json& body) {
    auto r = http.Post(path, auth(), body.dump(), "application/json");
    REQUIRE(r);
    return {r->status, r->body.empty() ? Json() : Json::parse(r->body)};
  }
  std::pair<int, Json> get(const std::string& path) {
    auto r = http.Get(path, auth());
    REQUIRE(r);
    return {r->status, Json::parse(r->body)};
  }

  void login(const std::string& id, const std::string& pw) {
    auto [status, body] = post("/auth/login", {{"identity_id", id}, {"password", pw}});
    REQUIRE(status == 200);
    token = body["token"];
  }
};

}  // namespace

TEST_CASE("status mapping") {
  using gateway::http_status;
  CHECK(http_status(ErrorKind::Authorization) == 403);
  CHECK(http_status(ErrorKind::ConsentRequired) == 403);
  CHECK(http_status(ErrorKind::InvalidIdentity) == 401);
  CHECK(http_status(ErrorKind::InvalidPassword) == 401);
  CHECK(http_status(ErrorKind::SessionExpired) == 401);
  CHECK(http_status(ErrorKind::NotFound) == 404);
  CHECK(http_status(ErrorKind::Validation) == 422);
  CHECK(http_status(ErrorKind::Timeout) == 504);
  CHECK(http_status(ErrorKind::SizeLimit) == 413);
  CHECK(http_status(ErrorKind::Duplicate) == 409);
  CHECK(http_status(ErrorKind::Io) == 500);
}

TEST_CASE("REST walk-through") {
  LiveStack stack;
  Client anon(stack);
  CHECK(anon.get("/health").first == 200);

  auto [s401, e401] = anon.post("/auth/login", {{"identity_id", "ghost"}, {"password", "x"}});
  CHECK(s401 == 401);
  CHECK(e401["message"] == "Invalid Identity");
  auto [s401b, e401b] = anon.post("/auth/login", {{"identity_id", "admin@AuthorityOrg"}, {"password", "x"}});
  CHECK(s401b == 401);
  CHECK(e401b["message"] == "Invalid Password");
  CHECK(anon.get("/news").first == 401);

  std::map<std::string, Client*> admins;
  Client auth_admin(stack), doc_admin(stack), nag_admin(stack);
  auth_admin.login("admin@AuthorityOrg", "adminpw");
  doc_admin.login("admin@DoctorOrg", "adminpw");
  nag_admin.login("admin@NagorikOrg", "adminpw");

  auto enroll = [&](Client& admin, const std::string& id) {
    auto [st, body] = admin.post("/admin/users", {{"identity_id", id}, {"password", "pw"}, {"display_name", id}});
    CHECK(st == 201);
    Client c(stack);
    c.login(id, "pw");
    return c.token;
  };
  Client bmdc(stack), dr(stack), pt(stack), other(stack);
  bmdc.token = enroll(auth_admin, "bmdc");
  dr.token = enroll(doc_admin, "dr.h");
  pt.token = enroll(nag_admin, "pt.h");
  other.token = enroll(nag_admin, "pt.other");
  CHECK(pt.post("/admin/users", {{"identity_id", "x"}, {"password", "pw"}}).first == 403);
  CHECK(nag_admin.post("/admin/users", {{"identity_id", "pt.h"}, {"password", "pw"}}).first == 409);

  auto [s_reg, reg] = dr.post("/doctors", {{"name", "Dr H"}, {"specialty", "cardiology"}});
  CHECK(s_reg == 201);
  CHECK(reg["valid"] == true);
  CHECK(reg["result"]["status"] == "pending");
  CHECK(reg["tx_id"].get<std::string>().size() == 64);
  CHECK(pt.post("/doctors/dr.h/approve", Json::object()).first == 403);
  CHECK(bmdc.post("/doctors/dr.h/approve", {{"decision", "approve"}}).first == 201);
  CHECK(bmdc.post("/doctors/dr.h/approve", {{"decision", "approve"}}).first == 409);
  CHECK(pt.get("/doctors/dr.h").second["result"]["status"] == "approved");

  CHECK(bmdc.post("/medicines", {{"medicine_id", "m1"}, {"generic_name", "M1"}}).first == 201);
  CHECK(bmdc.post("/medicines/m1/authorize", {{"authorized", true}}).first == 201);
  CHECK(pt.get("/medicines").second["result"].size() == 1);

  CHECK(pt.post("/patients", {{"allergies", {"m1"}}}).first == 201);
  auto items = Json::array({Json{{"medicine_id", "m1"}, {"dosage", "1"}, {"days", 1}}});
  CHECK(dr.post("/prescriptions", {{"patient_id", "pt.h"}, {"items", items}}).first == 403);
  CHECK(pt.post("/consents", {{"doctor_id", "dr.h"}}).first == 201);
  auto [s_rx, rx] = dr.post("/prescriptions", {{"patient_id", "pt.h"}, {"items", items}});
  CHECK(s_rx == 201);
  CHECK(rx["result"]["warnings"] == Json::array({"allergy:m1"}));
  CHECK(dr.get("/patients/pt.h/history").second["result"]["prescriptions"].size() == 1);
  CHECK(other.get("/patients/pt.h/history").first == 403);
  CHECK(dr.post("/prescriptions", {{"patient_id", "pt.h"}}).first == 422);

  auto [s_ap, ap] = pt.post("/appointments", {{"doctor_id", "dr.h"}, {"slot", 42}});
  CHECK(s_ap == 201);
  auto appt = ap["result"]["appt_id"].get<std::string>();
  CHECK(dr.post("/appointments/" + appt + "/confirm", Json::object()).second["result"]["status"] == "confirmed");
  CHECK(pt.post("/appointments/" + appt + "/cancel", Json::object()).second["result"]["status"] == "cancelled");

  auto [s_c, c] = pt.post("/complaints", {{"subject", "s"}, {"body", "b"}, {"severity", "high"}});
  CHECK(s_c == 201);
  auto cid = c["result"]["complaint_id"].get<std::string>();
  CHECK(pt.get("/complaints/" + cid).second["result"]["priority_rank"] == 1);
  CHECK(other.get("/complaints/" + cid).first == 403);
  CHECK(bmdc.post("/complaints/" + cid + "/review", {{"action", "review"}}).second["result"]["status"] == "in_review");
  CHECK(bmdc.get("/complaints/missing").first == 404);

  CHECK(pt.get("/specialists?specialty=cardiology").second["result"].size() == 1);
  CHECK(pt.get("/specialists").first == 422);
  CHECK(bmdc.post("/distributions", {{"medicine_id", "m1"}, {"facility", "f"}, {"quantity", 2}}).first == 201);
  CHECK(bmdc.post("/distributions", {{"medicine_id", "m1"}, {"facility", "f"}, {"quantity", 0}}).first == 422);
  CHECK(bmdc.get("/analytics/tendency/dr.h").second["result"] == Json{{"m1", 1}});
  CHECK(bmdc.get("/analytics/stats?group_by=medicine").second["result"]["groups"]["m1"] == "suppressed");
  CHECK(dr.get("/analytics/stats").first == 403);
  CHECK(bmdc.post("/news", {{"title", "t"}, {"body", "b"}}).first == 201);
  CHECK(pt.get("/news").second["result"].size() == 1);

  std::string blob = "scan bytes";
  auto put = pt.http.Put("/documents", pt.auth(), blob, "image/png");
  REQUIRE(put);
  CHECK(put->status == 201);
  auto digest = Json::parse(put->body)["digest"].get<std::string>();
  CHECK(digest == crypto::sha256(blob).hex());
  auto got = pt.http.Get("/documents/" + digest, pt.auth());
  REQUIRE(got);
  CHECK(got->body == blob);
  CHECK(got->get_header_value("Content-Type") == "image/png");
  CHECK(pt.get("/documents/" + std::string(64, '0')).first == 404);
  CHECK(dr.post("/patients/pt.h/tests", {{"doc_digest", digest}, {"description", "xray"}}).first == 201);

  auto bad = pt.http.Post("/complaints", pt.auth(), "{oops", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 422);

  CHECK(pt.post("/auth/logout", Json::object()).first == 200);
  CHECK(pt.get("/news").first == 401);
}

TEST_CASE("oversized documents are refused") {
  gateway::GatewayOptions opts;
  opts.doc_limit = 1024;
  LiveStack stack("paper", opts);
  Client c(stack);
  c.login("admin@NagorikOrg", "adminpw");
  auto r = c.http.Put("/documents", c.auth(), std::string(2048, 'x'), "text/plain");
  REQUIRE(r);
  CHECK(r->status == 413);
}

TEST_CASE("binding a taken port fails cleanly") {
  LiveStack stack;
  gateway::HttpApi second(stack.gateway);
  try {
    second.start("127.0.0.1", stack.port);
    FAIL("expected Bind");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Bind);
  }
}
