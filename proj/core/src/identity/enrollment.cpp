#include "healthledger/identity/enrollment.hpp"

#include "healthledger/common/error.hpp"

namespace hl::identity {

PasswordRecord PasswordRecord::create(std::string_view password, Bytes salt, int iterations) {
  PasswordRecord r;
  r.digest = crypto::password_digest(password, salt, iterations);
  r.salt = std::move(salt);
  r.iterations = iterations;
  return r;
}

bool PasswordRecord::matches(std::string_view password) const {
  return crypto::password_digest(password, salt, iterations) == digest;
}

std::string identity_key(const std::string& org, const std::string& identity_id) {
  return "identity/" + org + "/" + identity_id;
}

Json identity_record(const UserProfile& profile, Role role, const PasswordRecord& password) {
  return Json{{"attrs", profile.attrs},
              {"display_name", profile.display_name},
              {"identity_id", profile.identity_id},
              {"password",
               Json{{"algorithm", "pbkdf2-sha256"},
                    {"digest", password.digest.hex()},
                    {"iterations", password.iterations},
                    {"salt", to_hex(password.salt)}}},
              {"role", to_string(role)}};
}

std::optional<PasswordRecord> password_from_record(const Json& record) {
  if (!record.is_object() || !record.contains("password")) return std::nullopt;
  const auto& p = record["password"];
  try {
    PasswordRecord r;
    r.salt = from_hex(require_string(p, "salt"));
    r.digest = Digest256::from_hex(require_string(p, "digest"));
    r.iterations = static_cast<int>(require_int(p, "iterations"));
    if (r.iterations <= 0) return std::nullopt;
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace {

void check_registrar(const CAServer& ca, const HealthCard& admin_card) {
  if (admin_card.role != Role::Admin) {
    fail(ErrorKind::Authorization, "a user can only perform its general operations");
  }
  if (!verify_card(admin_card, ca.root_cert())) {
    fail(ErrorKind::Authorization, "registrar card does not verify under " + ca.org_name());
  }
}

void check_new_identity(const Wallet& wallet, const UserProfile& profile, Role role) {
  if (role != Role::User && role != Role::Admin) fail(ErrorKind::Validation, "only user or admin may be registered");
  if (profile.identity_id.empty()) fail(ErrorKind::Validation, "identity_id is required");
  if (wallet.contains(profile.identity_id)) {
    fail(ErrorKind::DuplicateIdentity, "identity '" + profile.identity_id + "' is already enrolled");
  }
}

Registration finish(HealthCard card, Wallet& wallet, const UserProfile& profile, std::string_view password,
                    Bytes salt) {
  wallet.put(card);
  Registration reg;
  reg.state_key = identity_key(card.org, card.identity_id);
  reg.state_record = identity_record(profile, card.role, PasswordRecord::create(password, std::move(salt)));
  reg.card = std::move(card);
  return reg;
}

}  // namespace

Registration register_user(CAServer& ca, Wallet& wallet, const HealthCard& admin_card, const UserProfile& profile,
                           Role role, std::string_view password) {
  check_registrar(ca, admin_card);
  check_new_identity(wallet, profile, role);
  return finish(ca.issue_card(profile.identity_id, role), wallet, profile, password,
                crypto::random_bytes(kSaltSize));
}

Registration register_user(CAServer& ca, Wallet& wallet, const HealthCard& admin_card, const UserProfile& profile,
                           Role role, std::string_view password, crypto::DeterministicRng& rng) {
  check_registrar(ca, admin_card);
  check_new_identity(wallet, profile, role);
  auto card = ca.issue_card(profile.identity_id, role, rng);
  return finish(std::move(card), wallet, profile, password, rng.bytes(kSaltSize));
}

Registration password_registration(const HealthCard& card, std::string_view display_name, std::string_view password,
                                   crypto::DeterministicRng* rng) {
  UserProfile profile{card.identity_id, std::string(display_name), Json::object()};
  auto salt = rng ? rng->bytes(kSaltSize) : crypto::random_bytes(kSaltSize);
  Registration reg;
  reg.card = card;
  reg.state_key = identity_key(card.org, card.identity_id);
  reg.state_record = identity_record(profile, card.role, PasswordRecord::create(password, std::move(salt)));
  return reg;
}

AccessGrant authenticate(const std::string& identity_id, std::string_view password, const Wallet& wallet,
                         const ledger::WorldState& state) {
  auto card = wallet.get(identity_id);
  if (!card) fail(ErrorKind::InvalidIdentity, "Invalid Identity");

  auto stored = state.get(identity_key(card->org, identity_id));
  std::optional<PasswordRecord> record;
  if (stored) {
    try {
      record = password_from_record(canonical_parse(stored->value));
    } catch (const Error&) {
      record.reset();
    }
  }
  if (!record || !record->matches(password)) fail(ErrorKind::InvalidPassword, "Invalid Password");

  return AccessGrant{std::move(*card), to_hex(crypto::random_bytes(16))};
}

}  // namespace hl::identity
