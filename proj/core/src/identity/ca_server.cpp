#include "healthledger/identity/ca_server.hpp"

#include "healthledger/common/error.hpp"

namespace hl::identity {

CAServer::CAServer(std::string org_name, crypto::KeyPair root_key)
    : org_name_(std::move(org_name)), root_key_(std::move(root_key)) {
  root_cert_.serial = 0;
  root_cert_.subject_id = "ca." + org_name_;
  root_cert_.org = org_name_;
  root_cert_.role = Role::Admin;
  root_cert_.public_key = root_key_.public_key();
  root_cert_.issuer = org_name_;
  root_cert_.is_ca = true;
  root_cert_.signature = root_key_.sign(as_bytes(canonical_dump(root_cert_.body_json())));
  issued_serials_.insert(0);
}

CAServer::CAServer(CAServer&& other) noexcept
    : org_name_(std::move(other.org_name_)),
      root_key_(std::move(other.root_key_)),
      root_cert_(std::move(other.root_cert_)),
      issued_serials_(std::move(other.issued_serials_)),
      next_serial_(other.next_serial_),
      admin_enrolled_(other.admin_enrolled_) {}

CAServer& CAServer::operator=(CAServer&& other) noexcept {
  if (this != &other) {
    org_name_ = std::move(other.org_name_);
    root_key_ = std::move(other.root_key_);
    root_cert_ = std::move(other.root_cert_);
    issued_serials_ = std::move(other.issued_serials_);
    next_serial_ = other.next_serial_;
    admin_enrolled_ = other.admin_enrolled_;
  }
  return *this;
}

CAServer CAServer::bootstrap(std::string org_name) {
  return CAServer(std::move(org_name), crypto::KeyPair::generate());
}

CAServer CAServer::bootstrap(std::string org_name, crypto::DeterministicRng& rng) {
  return CAServer(std::move(org_name), crypto::KeyPair::from_seed(rng.bytes(crypto::kSeedSize)));
}

Certificate CAServer::issue(const std::string& subject_id, Role role, const Bytes& public_key) {
  std::lock_guard lock(mutex_);
  Certificate cert;
  cert.serial = next_serial_++;
  cert.subject_id = subject_id;
  cert.org = org_name_;
  cert.role = role;
  cert.public_key = public_key;
  cert.issuer = org_name_;
  cert.signature = root_key_.sign(as_bytes(canonical_dump(cert.body_json())));
  issued_serials_.insert(cert.serial);
  return cert;
}

HealthCard CAServer::issue_card_with(const std::string& identity_id, Role role, crypto::KeyPair key) {
  HealthCard card;
  card.identity_id = identity_id;
  card.certificate = issue(identity_id, role, key.public_key());
  card.private_key = key.seed();
  card.org = org_name_;
  card.role = role;
  return card;
}

HealthCard CAServer::issue_card(const std::string& identity_id, Role role) {
  return issue_card_with(identity_id, role, crypto::KeyPair::generate());
}

HealthCard CAServer::issue_card(const std::string& identity_id, Role role, crypto::DeterministicRng& rng) {
  return issue_card_with(identity_id, role, crypto::KeyPair::from_seed(rng.bytes(crypto::kSeedSize)));
}

HealthCard CAServer::enroll_admin_with(crypto::KeyPair key) {
  {
    std::lock_guard lock(mutex_);
    if (admin_enrolled_) fail(ErrorKind::AlreadyBootstrapped, "default admin of " + org_name_ + " already enrolled");
    admin_enrolled_ = true;
  }
  return issue_card_with("admin@" + org_name_, Role::Admin, std::move(key));
}

HealthCard CAServer::enroll_default_admin() { return enroll_admin_with(crypto::KeyPair::generate()); }

HealthCard CAServer::enroll_default_admin(crypto::DeterministicRng& rng) {
  return enroll_admin_with(crypto::KeyPair::from_seed(rng.bytes(crypto::kSeedSize)));
}

bool CAServer::admin_enrolled() const {
  std::lock_guard lock(mutex_);
  return admin_enrolled_;
}

bool CAServer::issued(std::uint64_t serial) const {
  std::lock_guard lock(mutex_);
  return issued_serials_.contains(serial);
}

CAServer bootstrap_ca(const std::string& org_name) { return CAServer::bootstrap(org_name); }

HealthCard enroll_default_admin(CAServer& ca) { return ca.enroll_default_admin(); }

bool verify_card(const Certificate& cert, const Certificate& ca_root) {
  if (!ca_root.is_ca) return false;
  if (cert.issuer != ca_root.org || cert.org != ca_root.org) return false;
  if (!verify_certificate(cert, ca_root.public_key)) return false;
  // Only the root itself may carry the CA flag.
  if (cert.is_ca && cert.public_key != ca_root.public_key) return false;
  return true;
}

bool verify_card(const HealthCard& card, const Certificate& ca_root) {
  return card.self_consistent() && verify_card(card.certificate, ca_root);
}

}  // namespace hl::identity
