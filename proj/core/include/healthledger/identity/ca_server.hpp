#pragma once

#include <cstdint>
#include <mutex>
#include <set>
#include <string>

#include "healthledger/common/crypto.hpp"
#include "healthledger/identity/certificate.hpp"
#include "healthledger/identity/health_card.hpp"

namespace hl::identity {

/// Certificate authority for one organization. Issuance is serialized by an
/// internal lock; verification needs only the root certificate.
class CAServer {
 public:
  // Fresh random root key.
  static CAServer bootstrap(std::string org_name);
  // Root key derived from `rng`; used by the deterministic harness.
  static CAServer bootstrap(std::string org_name, crypto::DeterministicRng& rng);

  CAServer(CAServer&& other) noexcept;
  CAServer& operator=(CAServer&& other) noexcept;

  const std::string& org_name() const { return org_name_; }
  const Certificate& root_cert() const { return root_cert_; }
  const Bytes& root_public_key() const { return root_key_.public_key(); }

  // Issues a certificate for an externally held key.
  Certificate issue(const std::string& subject_id, Role role, const Bytes& public_key);
  // Generates a key pair and issues a card around it.
  HealthCard issue_card(const std::string& identity_id, Role role);
  HealthCard issue_card(const std::string& identity_id, Role role, crypto::DeterministicRng& rng);

  // Default admin `admin@<org>`; a second call throws AlreadyBootstrapped.
  HealthCard enroll_default_admin();
  HealthCard enroll_default_admin(crypto::DeterministicRng& rng);

  bool admin_enrolled() const;
  bool issued(std::uint64_t serial) const;

 private:
  CAServer(std::string org_name, crypto::KeyPair root_key);
  HealthCard issue_card_with(const std::string& identity_id, Role role, crypto::KeyPair key);
  HealthCard enroll_admin_with(crypto::KeyPair key);

  std::string org_name_;
  crypto::KeyPair root_key_;
  Certificate root_cert_;
  std::set<std::uint64_t> issued_serials_;
  std::uint64_t next_serial_ = 1;
  bool admin_enrolled_ = false;
  mutable std::mutex mutex_;
};

CAServer bootstrap_ca(const std::string& org_name);
HealthCard enroll_default_admin(CAServer& ca);

// Certificate chain + role check against one org root.
bool verify_card(const Certificate& cert, const Certificate& ca_root);
bool verify_card(const HealthCard& card, const Certificate& ca_root);

}  // namespace hl::identity
