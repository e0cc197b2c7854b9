#include "healthledger/net/topology.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "healthledger/common/error.hpp"

namespace hl::net {

namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  fail(ErrorKind::Config, field + ": " + what);
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) config_error(path, "must be an object");
  auto it = j.find(key);
  if (it == j.end()) config_error(path + "." + key, "missing");
  return *it;
}

std::uint16_t port_of(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0 || j.get<std::uint64_t>() > 65535) {
    config_error(path, "must be a port number in 1..65535");
  }
  return static_cast<std::uint16_t>(j.get<std::uint64_t>());
}

std::string name_of(const Json& j, const std::string& path) {
  if (!j.is_string() || j.get<std::string>().empty()) config_error(path, "must be a non-empty string");
  return j.get<std::string>();
}

}  // namespace

void TopologyConfig::validate() const {
  if (orgs.empty()) config_error("orgs", "at least one organization is required");
  if (orderers.empty()) config_error("orderers", "at least one orderer is required");

  std::map<std::uint16_t, std::string> used;
  auto claim = [&](std::uint16_t port, const std::string& path) {
    if (port == 0) config_error(path, "must be a port number in 1..65535");
    auto [it, fresh] = used.emplace(port, path);
    if (!fresh) config_error(path, "port " + std::to_string(port) + " already used by " + it->second);
  };

  std::set<std::string> names;
  for (std::size_t i = 0; i < orgs.size(); ++i) {
    const auto& o = orgs[i];
    auto base = "orgs[" + std::to_string(i) + "]";
    if (o.name.empty()) config_error(base + ".name", "must be a non-empty string");
    if (!names.insert(o.name).second) config_error(base + ".name", "duplicate name '" + o.name + "'");
    claim(o.anchor_port, base + ".anchor_port");
    for (std::size_t g = 0; g < o.gossip_ports.size(); ++g) {
      claim(o.gossip_ports[g], base + ".gossip_ports[" + std::to_string(g) + "]");
    }
    claim(o.ca_port, base + ".ca_port");
    claim(o.state_port, base + ".state_port");
  }
  for (std::size_t i = 0; i < orderers.size(); ++i) {
    auto base = "orderers[" + std::to_string(i) + "]";
    if (orderers[i].id.empty()) config_error(base + ".id", "must be a non-empty string");
    if (!names.insert(orderers[i].id).second) config_error(base + ".id", "duplicate name '" + orderers[i].id + "'");
    claim(orderers[i].port, base + ".port");
  }
  claim(orderer_ca_port, "orderer_ca_port");
  claim(gateway_internal_port, "gateway_internal_port");
  claim(gateway_external_port, "gateway_external_port");
}

Json TopologyConfig::to_json() const {
  auto org_list = Json::array();
  for (const auto& o : orgs) {
    org_list.push_back(Json{{"anchor_port", o.anchor_port},
                            {"ca_port", o.ca_port},
                            {"gossip_ports", o.gossip_ports},
                            {"name", o.name},
                            {"stakeholder", std::string(chaincode::to_string(o.stakeholder))},
                            {"state_port", o.state_port}});
  }
  auto orderer_list = Json::array();
  for (const auto& o : orderers) orderer_list.push_back(Json{{"id", o.id}, {"port", o.port}});
  return Json{{"gateway_external_port", gateway_external_port},
              {"gateway_internal_port", gateway_internal_port},
              {"orderer_ca_port", orderer_ca_port},
              {"orderers", std::move(orderer_list)},
              {"orgs", std::move(org_list)},
              {"seed", seed}};
}

TopologyConfig TopologyConfig::from_json(const Json& j) {
  TopologyConfig c;
  const auto& orgs = field(j, "topology", "orgs");
  if (!orgs.is_array()) config_error("orgs", "must be a list");
  for (std::size_t i = 0; i < orgs.size(); ++i) {
    auto base = "orgs[" + std::to_string(i) + "]";
    const auto& o = orgs[i];
    OrgTopology t;
    t.name = name_of(field(o, base, "name"), base + ".name");
    auto role = name_of(field(o, base, "stakeholder"), base + ".stakeholder");
    auto parsed = chaincode::parse_stakeholder(role);
    if (!parsed || *parsed == chaincode::Stakeholder::Admin) {
      config_error(base + ".stakeholder", "must be nagorik, doctor or authority");
    }
    t.stakeholder = *parsed;
    t.anchor_port = port_of(field(o, base, "anchor_port"), base + ".anchor_port");
    const auto& gossip = field(o, base, "gossip_ports");
    if (!gossip.is_array()) config_error(base + ".gossip_ports", "must be a list");
    for (std::size_t g = 0; g < gossip.size(); ++g) {
      t.gossip_ports.push_back(port_of(gossip[g], base + ".gossip_ports[" + std::to_string(g) + "]"));
    }
    t.ca_port = port_of(field(o, base, "ca_port"), base + ".ca_port");
    t.state_port = port_of(field(o, base, "state_port"), base + ".state_port");
    c.orgs.push_back(std::move(t));
  }
  const auto& orderers = field(j, "topology", "orderers");
  if (!orderers.is_array()) config_error("orderers", "must be a list");
  for (std::size_t i = 0; i < orderers.size(); ++i) {
    auto base = "orderers[" + std::to_string(i) + "]";
    c.orderers.push_back({name_of(field(orderers[i], base, "id"), base + ".id"),
                          port_of(field(orderers[i], base, "port"), base + ".port")});
  }
  c.orderer_ca_port = port_of(field(j, "topology", "orderer_ca_port"), "orderer_ca_port");
  c.gateway_internal_port = port_of(field(j, "topology", "gateway_internal_port"), "gateway_internal_port");
  c.gateway_external_port = port_of(field(j, "topology", "gateway_external_port"), "gateway_external_port");
  const auto& seed = field(j, "topology", "seed");
  if (!seed.is_number_unsigned()) config_error("seed", "must be a non-negative integer");
  c.seed = seed.get<std::uint64_t>();
  c.validate();
  return c;
}

TopologyConfig parse_topology(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    config_error("topology", std::string("not valid JSON: ") + e.what());
  }
  return TopologyConfig::from_json(j);
}

TopologyConfig load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_topology(buf.str());
}

std::string anchor_id(const std::string& org) { return org + ".anchor"; }
std::string gossip_id(const std::string& org, std::size_t index) { return org + ".gossip" + std::to_string(index); }

}  // namespace hl::net
