#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "healthledger/chaincode/context.hpp"
#include "healthledger/common/canonical.hpp"

namespace hl::net {

struct OrgTopology {
  std::string name;
  // Stakeholder role given to the org's user cards.
  chaincode::Stakeholder stakeholder = chaincode::Stakeholder::Nagorik;
  std::uint16_t anchor_port = 0;
  std::vector<std::uint16_t> gossip_ports;
  std::uint16_t ca_port = 0;
  std::uint16_t state_port = 0;
};

struct OrdererTopology {
  std::string id;
  std::uint16_t port = 0;
};

struct TopologyConfig {
  std::vector<OrgTopology> orgs;
  std::vector<OrdererTopology> orderers;
  std::uint16_t orderer_ca_port = 0;
  std::uint16_t gateway_internal_port = 0;
  std::uint16_t gateway_external_port = 0;
  std::uint64_t seed = 0;

  // Throws Config naming the offending field.
  void validate() const;

  Json to_json() const;
  static TopologyConfig from_json(const Json& j);
};

TopologyConfig parse_topology(std::string_view text);
TopologyConfig load_topology(const std::filesystem::path& path);

// Node naming used throughout the harness.
std::string anchor_id(const std::string& org);
std::string gossip_id(const std::string& org, std::size_t index);

}  // namespace hl::net
