#pragma once

#include <map>
#include <string>

#include "healthledger/chaincode/context.hpp"
#include "healthledger/identity/certificate.hpp"
#include "healthledger/ledger/block.hpp"

namespace hl::gateway {

/// Maps a member certificate to its organization and stakeholder role,
/// using only the org roots carried by the genesis block.
class Msp {
 public:
  Msp(ledger::ConsortiumConfig consortium, std::map<std::string, chaincode::Stakeholder> org_stakeholders);

  // Throws InvalidIdentity when the cert does not chain to the root of the
  // org it names, Authorization when it is not a member (peer, orderer, CA).
  chaincode::Invoker resolve(const identity::Certificate& cert) const;
  bool is_member_of(const identity::Certificate& cert, const std::string& org) const;

  const ledger::ConsortiumConfig& consortium() const { return consortium_; }
  const identity::Certificate* org_root(const std::string& org) const;

 private:
  ledger::ConsortiumConfig consortium_;
  std::map<std::string, chaincode::Stakeholder> stakeholders_;
};

}  // namespace hl::gateway
