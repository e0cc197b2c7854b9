#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "healthledger/common/bytes.hpp"
#include "healthledger/common/canonical.hpp"

namespace hl::identity {

enum class Role { Admin, User, Peer, Orderer };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

/// Member certificate issued by an organization CA. The signature covers
/// the canonical encoding of every other field.
struct Certificate {
  std::uint64_t serial = 0;
  std::string subject_id;
  std::string org;
  Role role = Role::User;
  Bytes public_key;
  std::string issuer;
  std::string algorithm = "Ed25519";
  // Set only on the self-signed root of a CA.
  bool is_ca = false;
  Bytes signature;

  Json body_json() const;
  Json to_json() const;
  static Certificate from_json(const Json& j);

  bool operator==(const Certificate&) const = default;
};

// Checks the issuer signature against `issuer_public_key` and that the
// role value is one of the declared roles.
bool verify_certificate(const Certificate& cert, ByteView issuer_public_key);

}  // namespace hl::identity
