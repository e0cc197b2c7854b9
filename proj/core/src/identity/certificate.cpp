#include "healthledger/identity/certificate.hpp"

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"

namespace hl::identity {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Admin: return "admin";
    case Role::User: return "user";
    case Role::Peer: return "peer";
    case Role::Orderer: return "orderer";
  }
  return "user";
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "admin") return Role::Admin;
  if (text == "user") return Role::User;
  if (text == "peer") return Role::Peer;
  if (text == "orderer") return Role::Orderer;
  return std::nullopt;
}

Json Certificate::body_json() const {
  return Json{{"algorithm", algorithm}, {"ca", is_ca},           {"issuer", issuer},
              {"org", org},             {"public_key", to_hex(public_key)},
              {"role", to_string(role)}, {"serial", serial},     {"subject_id", subject_id}};
}

Json Certificate::to_json() const {
  auto j = body_json();
  j["signature"] = to_hex(signature);
  return j;
}

Certificate Certificate::from_json(const Json& j) {
  Certificate c;
  c.algorithm = require_string(j, "algorithm");
  c.is_ca = require(j, "ca").get<bool>();
  c.issuer = require_string(j, "issuer");
  c.org = require_string(j, "org");
  c.public_key = from_hex(require_string(j, "public_key"));
  auto role = parse_role(require_string(j, "role"));
  if (!role) fail(ErrorKind::Validation, "unknown certificate role");
  c.role = *role;
  c.serial = require_uint(j, "serial");
  c.subject_id = require_string(j, "subject_id");
  c.signature = from_hex(require_string(j, "signature"));
  return c;
}

bool verify_certificate(const Certificate& cert, ByteView issuer_public_key) {
  if (cert.algorithm != crypto::kSignatureAlgorithm) return false;
  if (cert.public_key.size() != crypto::kPublicKeySize) return false;
  auto body = canonical_dump(cert.body_json());
  return crypto::verify(issuer_public_key, as_bytes(body), cert.signature);
}

}  // namespace hl::identity
