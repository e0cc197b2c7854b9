#include <benchmark/benchmark.h>

#include <random>

#include "healthledger/common/crypto.hpp"
#include "healthledger/ledger/block.hpp"
#include "healthledger/ledger/world_state.hpp"
#include "healthledger/loadtest/apdex.hpp"
#include "healthledger/ordering/block_cutter.hpp"

using namespace hl;

namespace {

std::vector<ledger::Transaction> make_txs(std::size_t n, std::size_t payload) {
  std::vector<ledger::Transaction> txs;
  for (std::size_t i = 0; i < n; ++i) {
    ledger::Transaction t;
    t.proposal.contract_fn = "kv.put";
    t.proposal.args = Json::array({"k" + std::to_string(i), std::string(payload, 'v')});
    t.proposal.nonce = Bytes(16, static_cast<std::uint8_t>(i));
    t.tx_id = ledger::compute_tx_id(t.proposal);
    t.read_set.push_back({"kv/k" + std::to_string(i), std::nullopt});
    t.write_set.push_back({"kv/k" + std::to_string(i), std::string(payload, 'v')});
    txs.push_back(t);
  }
  return txs;
}

void BM_Sha256(benchmark::State& state) {
  std::string data(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(crypto::sha256(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sha256)->Arg(64)->Arg(4096)->Arg(1 << 20);

void BM_DataHash(benchmark::State& state) {
  auto txs = make_txs(10, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ledger::compute_data_hash(txs));
}
BENCHMARK(BM_DataHash)->Arg(100)->Arg(10'000);

void BM_BlockHash(benchmark::State& state) {
  ledger::BlockHeader h;
  h.number = 42;
  h.prev_hash = crypto::sha256("prev");
  h.data_hash = crypto::sha256("data");
  h.timestamp_ms = 1'700'000'000'000;
  for (auto _ : state) benchmark::DoNotOptimize(ledger::compute_block_hash(h));
}
BENCHMARK(BM_BlockHash);

void BM_SignVerify(benchmark::State& state) {
  auto key = crypto::KeyPair::from_seed(Bytes(crypto::kSeedSize, 7));
  Bytes msg(256, 1);
  for (auto _ : state) {
    auto sig = key.sign(msg);
    benchmark::DoNotOptimize(crypto::verify(key.public_key(), msg, sig));
  }
}
BENCHMARK(BM_SignVerify);

void BM_CommitBlock(benchmark::State& state) {
  ledger::Block block;
  block.header.number = 1;
  block.transactions = make_txs(static_cast<std::size_t>(state.range(0)), 200);
  for (auto _ : state) benchmark::DoNotOptimize(ledger::commit_block(block, ledger::WorldState{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CommitBlock)->Arg(10)->Arg(100);

void BM_EncodeDecodeBlock(benchmark::State& state) {
  ledger::Block block;
  block.transactions = make_txs(10, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(ledger::Block::decode(block.encode()));
}
BENCHMARK(BM_EncodeDecodeBlock);

void BM_CutBlock(benchmark::State& state) {
  auto txs = make_txs(10, 1000);
  std::vector<ordering::PendingTx> pending;
  for (std::size_t i = 0; i < txs.size(); ++i) pending.push_back({i + 1, &txs[i], 0});
  ordering::BlockCutPolicy policy;
  ledger::BlockHeader prev;
  for (auto _ : state) benchmark::DoNotOptimize(ordering::cut_block(pending, policy, prev, 1, "orderer0"));
}
BENCHMARK(BM_CutBlock);

void BM_Apdex(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<loadtest::Sample> samples;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    samples.push_back({"r", static_cast<std::int64_t>(rng() % 60'000), static_cast<std::int64_t>(rng() % 3000),
                       rng() % 20 != 0, 200});
  }
  for (auto _ : state) benchmark::DoNotOptimize(loadtest::apdex_score(samples));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Apdex)->Arg(1000)->Arg(25'509);

}  // namespace

BENCHMARK_MAIN();
