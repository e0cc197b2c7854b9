#include "healthledger/gateway/msp.hpp"

#include "healthledger/common/error.hpp"
#include "healthledger/identity/ca_server.hpp"

namespace hl::gateway {

Msp::Msp(ledger::ConsortiumConfig consortium, std::map<std::string, chaincode::Stakeholder> org_stakeholders)
    : consortium_(std::move(consortium)), stakeholders_(std::move(org_stakeholders)) {}

const identity::Certificate* Msp::org_root(const std::string& org) const {
  for (const auto& o : consortium_.orgs) {
    if (o.name == org) return &o.root_cert;
  }
  return nullptr;
}

bool Msp::is_member_of(const identity::Certificate& cert, const std::string& org) const {
  const auto* root = org_root(org);
  return root && cert.org == org && !cert.is_ca && identity::verify_card(cert, *root);
}

chaincode::Invoker Msp::resolve(const identity::Certificate& cert) const {
  if (!is_member_of(cert, cert.org)) fail(ErrorKind::InvalidIdentity, "certificate is not issued by a consortium CA");
  chaincode::Invoker inv{cert.subject_id, cert.org, cert.role, chaincode::Stakeholder::Nagorik};
  switch (cert.role) {
    case identity::Role::Admin:
      inv.stakeholder = chaincode::Stakeholder::Admin;
      break;
    case identity::Role::User: {
      auto it = stakeholders_.find(cert.org);
      if (it == stakeholders_.end()) fail(ErrorKind::Authorization, "org '" + cert.org + "' has no stakeholder role");
      inv.stakeholder = it->second;
      break;
    }
    default:
      fail(ErrorKind::Authorization, "only member identities may invoke contracts");
  }
  return inv;
}

}  // namespace hl::gateway
