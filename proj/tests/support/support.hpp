#pragma once

// Shared harness for unit, property and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "healthledger/chaincode/context.hpp"
#include "healthledger/gateway/gateway.hpp"
#include "healthledger/gateway/http_api.hpp"
#include "healthledger/net/driver.hpp"
#include "healthledger/net/network.hpp"

namespace hl::testing {

inline constexpr const char* kAuthorityOrg = "AuthorityOrg";
inline constexpr const char* kDoctorOrg = "DoctorOrg";
inline constexpr const char* kNagorikOrg = "NagorikOrg";

std::filesystem::path config_dir();
std::filesystem::path oracle_script();
net::TopologyConfig topology(const std::string& name);  // "paper" or "ft"

// Fresh scratch directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

/// Simulated network plus a bootstrapped gateway.
struct SimHarness {
  explicit SimHarness(const std::string& topology_name = "paper", net::NetworkOptions options = {},
                      gateway::GatewayOptions gateway_options = {});

  // Registers `id` under the default admin of `org` and logs in.
  std::string enroll(const std::string& org, const std::string& id, const std::string& password = "pw");
  identity::HealthCard card(const std::string& id);
  gateway::InvokeResult call(const std::string& token, const std::string& fn, Json args);

  net::TopologyConfig topo;
  net::Network network;
  net::SimDriver driver;
  gateway::Gateway gateway;
  std::map<std::string, std::string> admin_tokens;
};

// Every live committing peer holds a chain that validates, replays to its
// live state, and matches the first peer byte for byte.
struct ConvergenceReport {
  bool all_valid = true;
  bool replay_matches = true;
  bool identical = true;
  std::uint64_t height = 0;
  std::string detail;
};
ConvergenceReport check_convergence(const net::Network& network);

/// Wall-clock network, gateway and REST server on a free local port.
struct LiveStack {
  explicit LiveStack(const std::string& topology_name = "paper", gateway::GatewayOptions gateway_options = {});
  ~LiveStack();

  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port); }

  net::Network network;
  net::LiveDriver driver;
  gateway::Gateway gateway;
  gateway::HttpApi api;
  std::uint16_t port = 0;
};

// Authority user "bmdc" (password bmdcpw) and citizen "nagorik" (nagorikpw),
// the two user types of the load scenario.
void enroll_demo_users(gateway::Gateway& gateway);

// ---- authorization matrix ---------------------------------------------------------

// Declared table, written out by hand: function -> stakeholders allowed.
const std::map<std::string, std::set<chaincode::Stakeholder>>& declared_authorization();

struct MatrixReport {
  std::size_t pairs = 0;
  std::vector<std::string> deviations;
};
// Every (function, stakeholder) pair against the contract table and against
// actual dispatch with non-array args: allowed pairs must get past the role
// check (Validation), denied pairs must get Authorization.
MatrixReport check_authorization_matrix();

// ---- end-to-end scenario --------------------------------------------------------

struct E2EReport {
  bool ok = false;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  std::int64_t ticks = 0;
  double seconds = 0;
  std::uint64_t height = 0;
  ConvergenceReport convergence;
};
E2EReport run_e2e_scenario();

// ---- Raft failover --------------------------------------------------------------------

struct FailoverReport {
  std::size_t submitted = 0;
  std::size_t committed = 0;     // distinct tx ids in the chain
  std::size_t duplicates = 0;    // extra occurrences of a tx id
  std::size_t invalid = 0;       // committed with an Invalid flag
  std::string killed_leader;
  std::string new_leader;
  bool election_safety = false;
  std::int64_t ticks = 0;
  std::vector<std::string> block_hashes;
  ConvergenceReport convergence;
};
// Streams `count` kv.put transactions at the leader, kills the leader after
// kill_after of them, keeps resubmitting until everything commits.
FailoverReport run_failover(const std::string& topology_name, std::size_t count, std::size_t kill_after);

// ---- hash fixture --------------------------------------------------------------------

// Five-block chain from a seeded network, written as a block file.
std::filesystem::path write_chain_fixture(const std::filesystem::path& dir);


// ---- MVCC property ----------------------------------------------------------------

// Random concurrent read/write proposals, simulated against current or
// lagging snapshots, committed through apply_block and compared with a
// serial model that knows nothing about versions.
struct MvccReport {
  std::size_t cases = 0;
  std::size_t transactions = 0;
  std::size_t valid = 0;
  std::size_t invalid = 0;
  std::vector<std::string> mismatches;
};
MvccReport run_mvcc_property(std::size_t cases, std::uint64_t seed);

// ---- external hash oracle -------------------------------------------------------

struct OracleRow {
  std::uint64_t number = 0;
  std::string block_hash;
  std::string data_hash;
  bool ok = false;
  std::string reason;
};
struct OracleRun {
  bool ran = false;  // interpreter and script available
  int exit_code = -1;
  std::vector<OracleRow> rows;
};
OracleRun run_chain_oracle(const std::filesystem::path& block_file);

struct HashAgreement {
  bool ok = false;
  std::size_t blocks = 0;
  std::vector<std::string> block_hashes;  // hex, from the C++ side
  std::string detail;
};
// Block and data hashes of every record against the oracle's.
HashAgreement compare_with_oracle(const std::filesystem::path& block_file);

struct MutationReport {
  std::size_t mutations = 0;
  std::size_t detected = 0;  // flagged at the height of the touched record
  std::vector<std::string> misses;
};
// Flips the low bit of every byte of the file in turn and validates.
MutationReport mutate_every_byte(const std::filesystem::path& block_file);

// ---- block cap ------------------------------------------------------------------------

struct BlockCapReport {
  std::size_t batch_bytes = 0;                // encoded size of the submitted batch
  std::size_t committed = 0;                  // batch transactions found in the chain
  std::vector<std::size_t> block_sizes;       // committed size of each block holding them
  bool oversize_rejected = false;             // the lone 2 MB transaction
  std::string oversize_detail;
};
// Five endorsed kv.put transactions with 150 KB values (about 300 KB
// encoded) submitted back to back to the Raft leader, then one 2 MB one.
BlockCapReport run_block_cap(const std::string& topology_name);

}  // namespace hl::testing
