#include "healthledger/identity/health_card.hpp"

#include "healthledger/common/error.hpp"

namespace hl::identity {

Bytes HealthCard::sign(ByteView message) const {
  return crypto::KeyPair::from_seed(private_key).sign(message);
}

bool HealthCard::self_consistent() const {
  if (certificate.subject_id != identity_id || certificate.org != org || certificate.role != role) return false;
  if (private_key.size() != crypto::kSeedSize) return false;
  static constexpr std::string_view kProbe = "health-card-probe";
  auto kp = crypto::KeyPair::from_seed(private_key);
  if (kp.public_key() != certificate.public_key) return false;
  return crypto::verify(certificate.public_key, as_bytes(kProbe), kp.sign(as_bytes(kProbe)));
}

Json HealthCard::to_json() const {
  return Json{{"certificate", certificate.to_json()},
              {"identity_id", identity_id},
              {"org", org},
              {"private_key", to_hex(private_key)},
              {"role", to_string(role)}};
}

HealthCard HealthCard::from_json(const Json& j) {
  HealthCard c;
  c.certificate = Certificate::from_json(require(j, "certificate"));
  c.identity_id = require_string(j, "identity_id");
  c.org = require_string(j, "org");
  c.private_key = from_hex(require_string(j, "private_key"));
  auto role = parse_role(require_string(j, "role"));
  if (!role) fail(ErrorKind::Validation, "unknown card role");
  c.role = *role;
  return c;
}

}  // namespace hl::identity
