#pragma once

#include <optional>
#include <string>

#include "healthledger/common/canonical.hpp"
#include "healthledger/common/crypto.hpp"
#include "healthledger/identity/ca_server.hpp"
#include "healthledger/identity/wallet.hpp"
#include "healthledger/ledger/world_state.hpp"

namespace hl::identity {

inline constexpr int kPasswordIterations = 10'000;
inline constexpr std::size_t kSaltSize = 16;

struct UserProfile {
  std::string identity_id;
  std::string display_name;
  Json attrs = Json::object();
};

/// Salted PBKDF2-SHA256 password digest as stored in world state.
struct PasswordRecord {
  Bytes salt;
  Digest256 digest;
  int iterations = kPasswordIterations;

  static PasswordRecord create(std::string_view password, Bytes salt, int iterations = kPasswordIterations);
  bool matches(std::string_view password) const;
};

// World-state key holding an identity's registration record.
std::string identity_key(const std::string& org, const std::string& identity_id);

// Registration record: display name, attrs and password digest.
Json identity_record(const UserProfile& profile, Role role, const PasswordRecord& password);
std::optional<PasswordRecord> password_from_record(const Json& record);

struct Registration {
  HealthCard card;
  std::string state_key;
  Json state_record;
};

// Issues a card for `profile` under the admin's CA and places it in the
// wallet. The returned record must then be committed to world state by the
// identity system contract; until then the user cannot log in.
Registration register_user(CAServer& ca, Wallet& wallet, const HealthCard& admin_card, const UserProfile& profile,
                           Role role, std::string_view password);
Registration register_user(CAServer& ca, Wallet& wallet, const HealthCard& admin_card, const UserProfile& profile,
                           Role role, std::string_view password, crypto::DeterministicRng& rng);

// Password record for an already issued card (default admins).
Registration password_registration(const HealthCard& card, std::string_view display_name, std::string_view password,
                                   crypto::DeterministicRng* rng = nullptr);

struct AccessGrant {
  HealthCard card;
  std::string session_token;  // 128-bit random, hex
};

// Login: (1) identity must hold a card in the wallet, else InvalidIdentity;
// (2) read the password digest from world state; (3) mismatch or missing
// record is InvalidPassword; (4) otherwise grant access.
AccessGrant authenticate(const std::string& identity_id, std::string_view password, const Wallet& wallet,
                         const ledger::WorldState& state);

}  // namespace hl::identity
