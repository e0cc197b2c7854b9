// healthledger: run the gateway, inspect topologies and check block files.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>

#include "healthledger/common/error.hpp"
#include "healthledger/gateway/gateway.hpp"
#include "healthledger/gateway/http_api.hpp"
#include "healthledger/ledger/block_store.hpp"
#include "healthledger/ledger/validate.hpp"
#include "healthledger/net/driver.hpp"
#include "healthledger/net/network.hpp"

using namespace hl;

namespace {

const char* role_name(net::NodeRole r) {
  switch (r) {
    case net::NodeRole::Orderer: return "orderer";
    case net::NodeRole::Anchor: return "anchor";
    case net::NodeRole::Gossip: return "gossip";
    case net::NodeRole::Gateway: return "gateway";
  }
  return "?";
}

// Authority user bmdc and citizen nagorik, as used by config/loadtest.json.
void seed_demo_users(gateway::Gateway& gw, const net::TopologyConfig& topo) {
  const auto& pw = gw.options().default_admin_password;
  for (const auto& org : topo.orgs) {
    auto token = gw.login("admin@" + org.name, pw).token;
    if (org.stakeholder == chaincode::Stakeholder::Authority) {
      gw.register_user(token, {"bmdc", "BMDC", Json::object()}, identity::Role::User, "bmdcpw");
    } else if (org.stakeholder == chaincode::Stakeholder::Nagorik) {
      gw.register_user(token, {"nagorik", "Nagorik", Json::object()}, identity::Role::User, "nagorikpw");
    }
  }
}

int serve(const std::string& topology_file, const std::string& host, int port, bool demo_users,
          std::int64_t commit_timeout_ms) {
  auto topo = net::load_topology(topology_file);
  net::Network network(topo);
  net::LiveDriver driver(network);
  gateway::GatewayOptions options;
  options.commit_timeout_ms = commit_timeout_ms;
  gateway::Gateway gw(driver, options, topo.seed);
  gw.bootstrap();
  if (demo_users) seed_demo_users(gw, topo);
  gateway::HttpApi api(gw);
  auto bind_port = static_cast<std::uint16_t>(port < 0 ? topo.gateway_internal_port : port);
  std::fprintf(stderr, "bootstrapped %zu orgs, height %llu; listening on %s:%u\n", topo.orgs.size(),
               static_cast<unsigned long long>(gw.chain_height()), host.c_str(), bind_port);
  api.listen(host, bind_port);
  driver.stop();
  return 0;
}

int topology_cmd(const std::string& file) {
  auto topo = net::load_topology(file);
  net::Network network(topo);
  for (const auto& n : network.nodes()) {
    std::printf("%-24s %-8s %-14s %u\n", n.id.c_str(), role_name(n.role), n.org.c_str(), n.port);
  }
  std::printf("%zu nodes, seed %llu\n", network.nodes().size(), static_cast<unsigned long long>(topo.seed));
  return 0;
}

int validate_cmd(const std::string& file, bool hashes) {
  if (!std::filesystem::exists(file)) fail(ErrorKind::NotFound, "no such block file: " + file);
  ledger::BlockStore store(file);
  auto report = ledger::validate_chain(store);
  if (hashes) {
    for (const auto& b : store.blocks()) {
      std::printf("%llu %s\n", static_cast<unsigned long long>(b.header.number),
                  ledger::compute_block_hash(b.header).hex().c_str());
    }
  }
  if (report.valid) {
    std::printf("valid: %llu blocks\n", static_cast<unsigned long long>(store.height()));
    return 0;
  }
  std::printf("invalid at height %llu: %s\n", static_cast<unsigned long long>(report.first_bad_height.value_or(0)),
              report.reason.c_str());
  return 1;
}

int simulate(const std::string& topology_file, std::int64_t ticks, const std::string& kill,
             const std::string& export_dir) {
  auto topo = net::load_topology(topology_file);
  net::Network network(topo);
  net::SimDriver driver(network);
  gateway::Gateway gw(driver, {}, topo.seed);
  gw.bootstrap();
  if (!kill.empty()) network.kill(kill);
  network.run_for(ticks);
  std::printf("tick %lld, leader %s\n", static_cast<long long>(network.now()), network.leader().value_or("-").c_str());
  for (const auto& n : network.nodes()) {
    if (n.role == net::NodeRole::Orderer) {
      std::printf("%-24s %s height %llu\n", n.id.c_str(), network.alive(n.id) ? "up  " : "down",
                  static_cast<unsigned long long>(network.orderer(n.id).chain().height()));
    }
  }
  for (const auto* p : network.peers()) {
    std::printf("%-24s height %llu\n", p->id().c_str(), static_cast<unsigned long long>(p->height()));
  }
  if (!export_dir.empty()) {
    std::filesystem::create_directories(export_dir);
    for (const auto& org : topo.orgs) {
      auto path = std::filesystem::path(export_dir) / (org.name + "-" + ledger::block_file_name(ledger::kChannel));
      ledger::write_block_records(path, network.anchor(org.name).chain().records());
      std::printf("wrote %s\n", path.c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"healthledger permissioned health ledger"};
  app.require_subcommand(1);

  std::string topo_file = "config/topology-paper.json";
  std::string host = "127.0.0.1";
  int port = -1;
  bool demo = false;
  std::int64_t commit_timeout = 10'000;
  auto* serve_cmd = app.add_subcommand("serve", "run the network and the REST gateway");
  serve_cmd->add_option("-t,--topology", topo_file, "topology file")->check(CLI::ExistingFile);
  serve_cmd->add_option("--host", host, "bind address");
  serve_cmd->add_option("-p,--port", port, "port (default: gateway internal port of the topology)");
  serve_cmd->add_flag("--demo-users", demo, "register bmdc/bmdcpw and nagorik/nagorikpw");
  serve_cmd->add_option("--commit-timeout-ms", commit_timeout, "how long a submit waits for commit");

  auto* topo_cmd = app.add_subcommand("topology", "validate a topology file and list its nodes");
  topo_cmd->add_option("file", topo_file, "topology file")->check(CLI::ExistingFile);

  std::string block_file;
  bool hashes = false;
  auto* val_cmd = app.add_subcommand("validate", "check a block file from genesis");
  val_cmd->add_option("file", block_file, "block file")->required();
  val_cmd->add_flag("--hashes", hashes, "print every block hash");

  std::int64_t ticks = 2'000;
  std::string kill, export_dir;
  auto* sim_cmd = app.add_subcommand("simulate", "bootstrap a simulated network and report heights");
  sim_cmd->add_option("-t,--topology", topo_file, "topology file")->check(CLI::ExistingFile);
  sim_cmd->add_option("--ticks", ticks, "simulated milliseconds to run after bootstrap");
  sim_cmd->add_option("--kill", kill, "node id to crash after bootstrap");
  sim_cmd->add_option("--export", export_dir, "write each anchor's block file here");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve_cmd) return serve(topo_file, host, port, demo, commit_timeout);
    if (*topo_cmd) return topology_cmd(topo_file);
    if (*val_cmd) return validate_cmd(block_file, hashes);
    if (*sim_cmd) return simulate(topo_file, ticks, kill, export_dir);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", std::string(to_string(e.kind())).c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
