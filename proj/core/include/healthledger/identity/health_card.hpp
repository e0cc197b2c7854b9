#pragma once

#include <string>

#include "healthledger/common/bytes.hpp"
#include "healthledger/common/canonical.hpp"
#include "healthledger/common/crypto.hpp"
#include "healthledger/identity/certificate.hpp"

namespace hl::identity {

/// Digital health card: a member's certificate plus the private key that
/// goes with it. Every ledger interaction is signed with one.
struct HealthCard {
  std::string identity_id;
  Certificate certificate;
  Bytes private_key;  // Ed25519 seed
  std::string org;
  Role role = Role::User;

  Bytes sign(ByteView message) const;
  // Sign/verify round-trip and subject/org/role agreement with the cert.
  bool self_consistent() const;

  Json to_json() const;
  static HealthCard from_json(const Json& j);

  bool operator==(const HealthCard&) const = default;
};

}  // namespace hl::identity
