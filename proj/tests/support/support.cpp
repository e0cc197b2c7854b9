#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>
#include <set>

#include <sys/wait.h>

#include "healthledger/chaincode/contracts.hpp"
#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"
#include "healthledger/ledger/validate.hpp"

#ifndef HL_CONFIG_DIR
#error "HL_CONFIG_DIR must point at the config/ directory"
#endif
#ifndef HL_ORACLE_SCRIPT
#error "HL_ORACLE_SCRIPT must point at the chain oracle"
#endif

namespace hl::testing {

std::filesystem::path config_dir() { return HL_CONFIG_DIR; }
std::filesystem::path oracle_script() { return HL_ORACLE_SCRIPT; }

net::TopologyConfig topology(const std::string& name) {
  return net::load_topology(config_dir() / ("topology-" + name + ".json"));
}

std::filesystem::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("hl-" + tag + "-" + std::to_string(rng() % 1'000'000'000));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

SimHarness::SimHarness(const std::string& topology_name, net::NetworkOptions options,
                       gateway::GatewayOptions gateway_options)
    : topo(topology(topology_name)),
      network(topo, options),
      driver(network),
      gateway(driver, gateway_options, topo.seed) {
  gateway.bootstrap();
  for (const auto& org : topo.orgs) {
    admin_tokens[org.name] = gateway.login("admin@" + org.name, gateway.options().default_admin_password).token;
  }
}

std::string SimHarness::enroll(const std::string& org, const std::string& id, const std::string& password) {
  gateway.register_user(admin_tokens.at(org), identity::UserProfile{id, id, Json::object()}, identity::Role::User,
                        password);
  return gateway.login(id, password).token;
}

identity::HealthCard SimHarness::card(const std::string& id) { return *gateway.wallet().get(id); }

gateway::InvokeResult SimHarness::call(const std::string& token, const std::string& fn, Json args) {
  return gateway.invoke(token, fn, std::move(args));
}

LiveStack::LiveStack(const std::string& topology_name, gateway::GatewayOptions gateway_options)
    : network(topology(topology_name)),
      driver(network),
      gateway(driver, gateway_options, network.config().seed),
      api(gateway) {
  gateway.bootstrap();
  port = api.start("127.0.0.1", 0);
}

LiveStack::~LiveStack() {
  api.stop();
  driver.stop();
}

void enroll_demo_users(gateway::Gateway& gateway) {
  const auto& pw = gateway.options().default_admin_password;
  auto authority = gateway.login(std::string("admin@") + kAuthorityOrg, pw).token;
  auto nagorik = gateway.login(std::string("admin@") + kNagorikOrg, pw).token;
  gateway.register_user(authority, {"bmdc", "BMDC", Json::object()}, identity::Role::User, "bmdcpw");
  gateway.register_user(nagorik, {"nagorik", "Nagorik", Json::object()}, identity::Role::User, "nagorikpw");
}

ConvergenceReport check_convergence(const net::Network& network) {
  ConvergenceReport r;
  auto peers = network.peers();
  if (peers.empty()) {
    r.all_valid = false;
    r.detail = "no live peers";
    return r;
  }
  const auto& reference = peers.front()->chain().records();
  r.height = peers.front()->height();
  for (const auto* p : peers) {
    auto report = ledger::validate_chain(p->chain());
    if (!report.valid) {
      r.all_valid = false;
      r.detail += p->id() + ": " + report.reason + "; ";
    }
    if (!(ledger::replay(p->chain()) == p->state())) {
      r.replay_matches = false;
      r.detail += p->id() + ": replay differs from live state; ";
    }
    if (p->chain().records() != reference) {
      r.identical = false;
      r.detail += p->id() + ": chain differs from " + peers.front()->id() + "; ";
    }
  }
  return r;
}

// ---- authorization matrix ---------------------------------------------------------

const std::map<std::string, std::set<chaincode::Stakeholder>>& declared_authorization() {
  using S = chaincode::Stakeholder;
  static const std::set<S> anyone{S::Nagorik, S::Doctor, S::Authority, S::Admin};
  static const std::map<std::string, std::set<S>> table{
      {"health.register_doctor", {S::Doctor}},
      {"health.approve_doctor", {S::Authority}},
      {"health.submit_credential_update", {S::Doctor}},
      {"health.approve_credential", {S::Authority}},
      {"health.get_doctor", anyone},
      {"health.find_specialist", anyone},
      {"health.add_medicine", {S::Authority}},
      {"health.set_medicine_authorized", {S::Authority}},
      {"health.list_medicines", anyone},
      {"health.upsert_patient", {S::Nagorik}},
      {"health.grant_consent", {S::Nagorik}},
      {"health.create_prescription", {S::Doctor}},
      {"health.add_test_result", {S::Doctor}},
      {"health.get_medical_history", {S::Doctor, S::Nagorik}},
      {"health.request_appointment", {S::Nagorik}},
      {"health.confirm_appointment", {S::Nagorik, S::Doctor}},
      {"health.cancel_appointment", {S::Nagorik, S::Doctor}},
      {"health.file_complaint", {S::Nagorik}},
      {"health.get_complaint_status", {S::Nagorik, S::Authority}},
      {"health.review_complaint", {S::Authority}},
      {"health.record_distribution", {S::Authority}},
      {"health.prescribing_tendency", {S::Authority}},
      {"health.anonymized_stats", {S::Authority}},
      {"health.post_news", {S::Authority}},
      {"health.get_news", anyone},
      {"identity.register", {S::Admin}},
      {"kv.put", {S::Admin}},
  };
  return table;
}

MatrixReport check_authorization_matrix() {
  using S = chaincode::Stakeholder;
  MatrixReport r;
  const auto& declared = declared_authorization();
  std::set<std::string> in_table;
  for (const auto& spec : chaincode::function_table()) {
    in_table.insert(spec.name);
    if (!declared.contains(spec.name)) r.deviations.push_back(spec.name + ": not in declared table");
  }
  for (const auto& [fn, allowed] : declared) {
    if (!in_table.contains(fn)) r.deviations.push_back(fn + ": missing from contract table");
  }

  ledger::WorldState empty;
  for (const auto& [fn, allowed] : declared) {
    for (auto s : {S::Nagorik, S::Doctor, S::Authority, S::Admin}) {
      ++r.pairs;
      const auto* spec = chaincode::find_function(fn);
      bool table_allows = spec && spec->allowed.contains(s);
      bool expected = allowed.contains(s);
      auto pair = fn + "/" + std::string(chaincode::to_string(s));
      if (table_allows != expected) r.deviations.push_back(pair + ": table disagrees");

      chaincode::TxContext ctx(empty, chaincode::Invoker{"probe", "ProbeOrg", identity::Role::User, s},
                               crypto::sha256(pair), 0);
      std::optional<ErrorKind> got;
      try {
        chaincode::invoke(fn, ctx, Json(nullptr));
      } catch (const Error& e) {
        got = e.kind();
      }
      auto want = expected ? ErrorKind::Validation : ErrorKind::Authorization;
      if (got != want) {
        r.deviations.push_back(pair + ": dispatch gave " + (got ? std::string(to_string(*got)) : "success"));
      }
    }
  }
  return r;
}

// ---- end-to-end scenario ---------------------------------------------------------------

E2EReport run_e2e_scenario() {
  E2EReport report;
  const auto wall_start = std::chrono::steady_clock::now();
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) report.failures.push_back(what);
  };

  try {
    SimHarness h("paper");
    expect(h.topo.orgs.size() == 3, "three organizations");

    auto bmdc = h.enroll(kAuthorityOrg, "bmdc");
    auto dr_a = h.enroll(kDoctorOrg, "dr.alam");
    auto dr_b = h.enroll(kDoctorOrg, "dr.bose");
    std::vector<std::string> citizens;
    for (const auto* id : {"rahim", "karim", "salma"}) citizens.push_back(h.enroll(kNagorikOrg, id));

    h.call(dr_a, "health.register_doctor", Json::array({Json{{"name", "Dr Alam"}, {"specialty", "cardiology"}}}));
    h.call(dr_b, "health.register_doctor", Json::array({Json{{"name", "Dr Bose"}, {"specialty", "cardiology"}}}));
    auto approved = h.call(bmdc, "health.approve_doctor", Json::array({"dr.alam", "approve"}));
    expect(approved.result["status"] == "approved", "doctor approved");

    const Json medicines = Json::array({
        Json{{"medicine_id", "paracetamol"}, {"generic_name", "Paracetamol"}, {"free_under_esp", true}},
        Json{{"medicine_id", "warfarin"}, {"generic_name", "Warfarin"}, {"contraindications", {"aspirin"}}},
        Json{{"medicine_id", "aspirin"}, {"generic_name", "Acetylsalicylic acid"}},
    });
    for (const auto& m : medicines) {
      h.call(bmdc, "health.add_medicine", Json::array({m}));
      auto r = h.call(bmdc, "health.set_medicine_authorized", Json::array({m["medicine_id"], true}));
      expect(r.result["authorized"] == true, "medicine authorized");
    }

    h.call(citizens[0], "health.upsert_patient", Json::array({Json{{"allergies", {"paracetamol"}}}}));
    h.call(citizens[0], "health.grant_consent", Json::array({"dr.alam", nullptr}));

    auto appt = h.call(citizens[0], "health.request_appointment", Json::array({"dr.alam", 9}));
    auto confirmed = h.call(dr_a, "health.confirm_appointment", Json::array({appt.result["appt_id"]}));
    expect(confirmed.result["status"] == "confirmed", "appointment confirmed");

    auto rx = h.call(dr_a, "health.create_prescription",
                     Json::array({"rahim", Json::array({Json{{"medicine_id", "paracetamol"},
                                                             {"dosage", "500mg"},
                                                             {"days", 5}}})}));
    for (const auto& w : rx.result["warnings"]) report.warnings.push_back(w.get<std::string>());
    expect(report.warnings == std::vector<std::string>{"allergy:paracetamol"}, "exactly one allergy warning");

    const char* severities[] = {"high", "low", "medium"};
    for (std::size_t i = 0; i < citizens.size(); ++i) {
      auto c = h.call(citizens[i], "health.file_complaint",
                      Json::array({"waiting time", "complaint " + std::to_string(i), severities[i]}));
      expect(c.receipt && c.receipt->valid, "complaint committed");
    }

    auto specialists = h.call(citizens[1], "health.find_specialist", Json::array({"cardiology"}));
    expect(specialists.result.size() == 1 && specialists.result[0]["doctor_id"] == "dr.alam",
           "specialist search returns the approved doctor only");
    auto tendency = h.call(bmdc, "health.prescribing_tendency", Json::array({"dr.alam"}));
    expect(tendency.result == Json{{"paracetamol", 1}}, "prescribing tendency");
    auto stats = h.call(bmdc, "health.anonymized_stats", Json::array({"specialty"}));
    expect(stats.result["groups"]["cardiology"] == "suppressed", "small group suppressed");

    // Let gossip settle before comparing every replica.
    h.network.run_for(500);
    report.convergence = check_convergence(h.network);
    expect(report.convergence.all_valid, "validate_chain passes on every peer");
    expect(report.convergence.replay_matches, "replay equals live state");
    expect(report.convergence.identical, "replicas identical");
    report.height = report.convergence.height;
    report.ticks = h.network.now();
  } catch (const std::exception& e) {
    report.failures.push_back(std::string("exception: ") + e.what());
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  report.ok = report.failures.empty();
  return report;
}

// ---- Raft failover -----------------------------------------------------------------------

FailoverReport run_failover(const std::string& topology_name, std::size_t count, std::size_t kill_after) {
  FailoverReport report;
  auto topo = topology(topology_name);
  net::Network network(topo);
  const std::string org = topo.orgs.front().name;
  const auto admin = network.default_admin(org);
  crypto::DeterministicRng nonces(topo.seed);

  network.run_until([](const net::Network& n) { return n.leader().has_value(); }, 5'000);

  std::vector<ledger::Transaction> txs;
  auto try_submit = [&](const ledger::Transaction& tx) {
    auto leader = network.leader();
    if (!leader) return;
    try {
      network.submit(*leader, tx);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TargetUnreachable) throw;
    }
  };

  for (std::size_t i = 0; i < count; ++i) {
    auto proposal = gateway::make_proposal(admin, "kv.put",
                                           Json::array({"item-" + std::to_string(i), "value-" + std::to_string(i)}),
                                           nonces.bytes(16), network.now());
    auto tx = network.anchor(org).endorse(proposal).tx;
    txs.push_back(tx);
    try_submit(tx);
    if (i + 1 == kill_after) {
      report.killed_leader = network.leader().value_or("");
      if (!report.killed_leader.empty()) network.kill(report.killed_leader);
    }
    network.run_for(5);
  }
  report.submitted = txs.size();

  const auto& anchor = network.anchor(org);
  auto all_committed = [&](const net::Network&) {
    return std::all_of(txs.begin(), txs.end(), [&](const auto& tx) { return anchor.receipt(tx.tx_id).has_value(); });
  };
  // Clients resubmit whatever has no receipt yet; orderers drop repeats.
  for (int round = 0; round < 400 && !all_committed(network); ++round) {
    network.run_for(250);
    for (const auto& tx : txs) {
      if (!anchor.receipt(tx.tx_id)) try_submit(tx);
    }
  }
  auto max_height = [&] {
    std::uint64_t h = 0;
    for (const auto& id : network.orderer_ids()) {
      if (network.alive(id)) h = std::max(h, network.orderer(id).chain().height());
    }
    return h;
  };
  try {
    network.run_until(
        [&](const net::Network& n) {
          auto target = max_height();
          auto peers = n.peers();
          return std::all_of(peers.begin(), peers.end(), [&](const auto* p) { return p->height() == target; });
        },
        20'000);
  } catch (const Error&) {
  }

  std::map<Digest256, int> seen;
  for (const auto& block : anchor.chain().blocks()) {
    if (block.header.number == 0) continue;
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
      seen[block.transactions[i].tx_id] += 1;
      if (block.validity_flags[i] != ledger::TxValidity::Valid) ++report.invalid;
    }
    report.block_hashes.push_back(ledger::compute_block_hash(block.header).hex());
  }
  for (const auto& tx : txs) {
    auto it = seen.find(tx.tx_id);
    if (it == seen.end()) continue;
    report.committed += 1;
    report.duplicates += static_cast<std::size_t>(it->second - 1);
  }
  report.new_leader = network.leader().value_or("");
  report.election_safety = network.election_safety_holds();
  report.ticks = network.now();
  report.convergence = check_convergence(network);
  return report;
}

// ---- hash fixture ------------------------------------------------------------------------

std::filesystem::path write_chain_fixture(const std::filesystem::path& dir) {
  SimHarness h("paper");
  auto token = h.enroll(kNagorikOrg, "fixture.citizen");
  (void)token;
  // Bootstrap wrote 3 blocks, registration one more: genesis + 4.
  const auto& chain = h.network.anchor(kNagorikOrg).chain();
  if (chain.height() != 5) fail(ErrorKind::Height, "fixture expected 5 blocks, got " + std::to_string(chain.height()));
  auto path = dir / ledger::block_file_name(ledger::kChannel);
  ledger::write_block_records(path, chain.records());
  return path;
}


// ---- MVCC property ----------------------------------------------------------------

namespace {

// Serial model: plain values plus, per present key, the name of the
// transaction that last wrote it. A read stays good while that owner is
// unchanged; an absent key has no owner.
struct SerialModel {
  std::map<std::string, std::string> values;
  std::map<std::string, std::string> owner;
  std::map<std::string, std::pair<std::uint64_t, std::uint32_t>> writer;
  std::set<std::string> committed;
};

struct Draft {
  std::string id;
  std::vector<std::string> reads;
  std::vector<std::pair<std::string, bool>> writes;  // key, delete?
  std::size_t snapshot = 0;                          // block height it was simulated at
};

std::string derived_value(const std::string& id, const std::vector<std::string>& read_values) {
  std::string v = id;
  for (const auto& r : read_values) v += "|" + r;
  return v.size() > 64 ? v.substr(0, 32) + v.substr(v.size() - 32) : v;
}

}  // namespace

MvccReport run_mvcc_property(std::size_t cases, std::uint64_t seed) {
  MvccReport report;
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) { return lo + rng() % (hi - lo + 1); };

  for (std::size_t c = 0; c < cases; ++c) {
    ++report.cases;
    std::size_t key_count = pick(2, 6);
    std::vector<std::string> keys;
    for (std::size_t k = 0; k < key_count; ++k) keys.push_back("kv/entry/k" + std::to_string(k));

    std::vector<ledger::WorldState> history{ledger::WorldState{}};
    std::vector<std::map<std::string, std::string>> owners_at{{}};
    SerialModel model;
    std::vector<ledger::Transaction> earlier;
    std::vector<Draft> earlier_drafts;
    std::size_t blocks = pick(1, 5);
    std::size_t serial = 0;

    for (std::size_t b = 1; b <= blocks; ++b) {
      std::size_t n = pick(1, 8);
      std::vector<ledger::Transaction> txs;
      std::vector<Draft> drafts;
      for (std::size_t i = 0; i < n; ++i) {
        if (!earlier.empty() && rng() % 10 == 0) {
          // Resubmission of something already ordered.
          std::size_t j = rng() % earlier.size();
          txs.push_back(earlier[j]);
          drafts.push_back(earlier_drafts[j]);
          continue;
        }
        std::size_t lag = std::min<std::size_t>(rng() % 3, history.size() - 1);
        std::size_t snap = history.size() - 1 - lag;
        const auto& state = history[snap];
        Draft d;
        d.id = "c" + std::to_string(c) + "t" + std::to_string(serial++);
        d.snapshot = snap;
        ledger::Transaction tx;
        tx.tx_id = crypto::sha256(d.id);
        std::vector<std::string> read_values;
        for (const auto& k : keys) {
          if (rng() % 3 != 0) continue;
          auto cur = state.get(k);
          tx.read_set.push_back({k, cur ? std::optional(cur->version) : std::nullopt});
          d.reads.push_back(k);
          read_values.push_back(cur ? cur->value : "-");
        }
        for (const auto& k : keys) {
          if (rng() % 3 != 0) continue;
          bool del = rng() % 6 == 0;
          tx.write_set.push_back({k, del ? std::nullopt : std::optional(derived_value(d.id, read_values))});
          d.writes.emplace_back(k, del);
        }
        txs.push_back(tx);
        drafts.push_back(d);
        earlier.push_back(tx);
        earlier_drafts.push_back(d);
      }

      ledger::Block block;
      block.header.number = b;
      block.transactions = txs;
      auto [next, flags] = ledger::commit_block(block, history.back());

      // Serial replay of the same drafts.
      for (std::size_t i = 0; i < drafts.size(); ++i) {
        const auto& d = drafts[i];
        bool ok = !model.committed.contains(d.id);
        const auto& then = owners_at[d.snapshot];
        for (const auto& k : d.reads) {
          auto a = then.find(k);
          auto b = model.owner.find(k);
          bool same = (a == then.end()) == (b == model.owner.end()) && (a == then.end() || a->second == b->second);
          if (!same) ok = false;
        }
        bool got = flags.at(i) == ledger::TxValidity::Valid;
        ++report.transactions;
        ++(got ? report.valid : report.invalid);
        if (ok != got) {
          report.mismatches.push_back("case " + std::to_string(c) + " block " + std::to_string(b) + " tx " +
                                      std::to_string(i) + ": model says " + (ok ? "valid" : "invalid"));
          continue;
        }
        if (!ok) continue;
        model.committed.insert(d.id);
        std::vector<std::string> read_values;
        for (const auto& k : d.reads) {
          auto it = model.values.find(k);
          read_values.push_back(it == model.values.end() ? "-" : it->second);
        }
        for (const auto& [k, del] : d.writes) {
          if (del) {
            model.values.erase(k);
            model.owner.erase(k);
            continue;
          }
          model.values[k] = derived_value(d.id, read_values);
          model.owner[k] = d.id;
          model.writer[k] = {b, static_cast<std::uint32_t>(i)};
        }
      }

      // Final values and versions must agree.
      std::map<std::string, std::string> actual;
      for (const auto& [k, vv] : next.entries()) {
        actual[k] = vv.value;
        if (model.writer[k] != std::pair{vv.version.block, vv.version.tx_index}) {
          report.mismatches.push_back("case " + std::to_string(c) + " version of " + k);
        }
      }
      if (actual != model.values) report.mismatches.push_back("case " + std::to_string(c) + " state diverged");
      history.push_back(std::move(next));
      owners_at.push_back(model.owner);
    }
  }
  return report;
}

// ---- external hash oracle -------------------------------------------------------

OracleRun run_chain_oracle(const std::filesystem::path& block_file) {
  OracleRun run;
#ifdef HL_PYTHON
  std::string python = HL_PYTHON;
#else
  std::string python;
#endif
  if (python.empty() || !std::filesystem::exists(oracle_script())) return run;
  std::string cmd = "\"" + python + "\" \"" + oracle_script().string() + "\" \"" + block_file.string() + "\"";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return run;
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = ::pclose(pipe);
  run.ran = true;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::size_t pos = 0;
  while (pos < out.size()) {
    auto end = out.find('\n', pos);
    if (end == std::string::npos) end = out.size();
    auto line = out.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    auto j = Json::parse(line);
    OracleRow row;
    row.number = j.at("number").get<std::uint64_t>();
    row.ok = j.at("ok").get<bool>();
    row.reason = j.value("reason", "");
    row.block_hash = j.value("block_hash", "");
    row.data_hash = j.value("data_hash", "");
    run.rows.push_back(row);
  }
  return run;
}

HashAgreement compare_with_oracle(const std::filesystem::path& block_file) {
  HashAgreement result;
  ledger::BlockStore store(block_file);
  auto oracle = run_chain_oracle(block_file);
  if (!oracle.ran) {
    result.detail = "oracle interpreter unavailable";
    return result;
  }
  if (oracle.exit_code != 0) {
    result.detail = "oracle rejected the chain (exit " + std::to_string(oracle.exit_code) + ")";
    return result;
  }
  if (oracle.rows.size() != store.height()) {
    result.detail = "oracle saw " + std::to_string(oracle.rows.size()) + " blocks, store has " +
                    std::to_string(store.height());
    return result;
  }
  for (std::uint64_t i = 0; i < store.height(); ++i) {
    const auto& block = store.at(i);
    auto bh = ledger::compute_block_hash(block.header).hex();
    auto dh = ledger::compute_data_hash(block.transactions).hex();
    result.block_hashes.push_back(bh);
    const auto& row = oracle.rows[i];
    if (!row.ok || row.number != i || row.block_hash != bh || row.data_hash != dh) {
      result.detail = "block " + std::to_string(i) + " disagrees: " + row.reason;
      return result;
    }
  }
  result.blocks = store.height();
  result.ok = true;
  return result;
}

MutationReport mutate_every_byte(const std::filesystem::path& block_file) {
  MutationReport report;
  std::string raw;
  {
    std::ifstream in(block_file, std::ios::binary);
    raw.assign(std::istreambuf_iterator<char>(in), {});
  }
  // Record index owning each byte, length prefix included.
  std::vector<std::uint64_t> owner(raw.size());
  std::size_t pos = 0;
  for (std::uint64_t rec = 0; pos < raw.size(); ++rec) {
    std::size_t n = 0;
    for (int k = 0; k < 4; ++k) n = (n << 8) | static_cast<unsigned char>(raw[pos + k]);
    for (std::size_t k = 0; k < 4 + n && pos + k < raw.size(); ++k) owner[pos + k] = rec;
    pos += 4 + n;
  }
  auto dir = scratch_dir("mutate");
  auto file = dir / "mutated.blocks";
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::string copy = raw;
    copy[i] = static_cast<char>(copy[i] ^ 0x01);
    {
      std::ofstream out(file, std::ios::binary | std::ios::trunc);
      out.write(copy.data(), static_cast<std::streamsize>(copy.size()));
    }
    bool truncated = false;
    auto records = ledger::read_block_records(file, &truncated);
    auto verdict = ledger::validate_records(records, truncated);
    ++report.mutations;
    if (!verdict.valid && verdict.first_bad_height == owner[i]) {
      ++report.detected;
    } else if (report.misses.size() < 20) {
      report.misses.push_back("byte " + std::to_string(i) + " of record " + std::to_string(owner[i]) + ": " +
                              (verdict.valid ? "accepted" : "flagged at " + std::to_string(*verdict.first_bad_height)));
    }
  }
  std::filesystem::remove_all(dir);
  return report;
}

// ---- block cap ------------------------------------------------------------------------

BlockCapReport run_block_cap(const std::string& topology_name) {
  BlockCapReport report;
  auto topo = topology(topology_name);
  net::Network network(topo);
  const std::string org = topo.orgs.front().name;
  const auto admin = network.default_admin(org);
  crypto::DeterministicRng nonces(topo.seed);
  network.run_until([](const net::Network& n) { return n.leader().has_value(); }, 5'000);

  auto endorsed = [&](const std::string& key, std::size_t bytes) {
    auto proposal = gateway::make_proposal(admin, "kv.put", Json::array({key, std::string(bytes, 'x')}),
                                           nonces.bytes(16), network.now());
    return network.anchor(org).endorse(proposal).tx;
  };

  std::vector<ledger::Transaction> batch;
  for (int i = 0; i < 5; ++i) batch.push_back(endorsed("scan-" + std::to_string(i), 150'000));
  for (const auto& tx : batch) {
    report.batch_bytes += tx.encoded_size();
    network.submit(*network.leader(), tx);
  }
  const auto& anchor = network.anchor(org);
  try {
    network.run_until(
        [&](const net::Network&) {
          return std::all_of(batch.begin(), batch.end(),
                             [&](const auto& tx) { return anchor.receipt(tx.tx_id).has_value(); });
        },
        10'000);
  } catch (const Error&) {
  }
  std::set<Digest256> ids;
  for (const auto& tx : batch) ids.insert(tx.tx_id);
  for (const auto& block : anchor.chain().blocks()) {
    std::size_t hits = 0;
    for (const auto& tx : block.transactions) hits += ids.contains(tx.tx_id) ? 1 : 0;
    if (hits == 0) continue;
    report.committed += hits;
    report.block_sizes.push_back(ledger::committed_size(block));
  }

  auto huge = endorsed("scan-huge", 2 * 1024 * 1024);
  try {
    network.submit(*network.leader(), huge);
    report.oversize_detail = "accepted";
  } catch (const Error& e) {
    report.oversize_rejected = e.kind() == ErrorKind::Oversize;
    report.oversize_detail = e.what();
  }
  return report;
}

}  // namespace hl::testing
