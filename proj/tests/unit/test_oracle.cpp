#include <doctest.h>

#include <fstream>
#include <iterator>

#include "healthledger/ledger/block_store.hpp"
#include "healthledger/ledger/validate.hpp"
#include "support.hpp"

using namespace hl;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Block hashes of the seeded five-block fixture, computed once by
// tests/oracle/chain_oracle.py and frozen here.
const std::vector<std::string> kFrozenBlockHashes = {
    "5ac9ce4cca0a3329d44e78c4ca87ca281059e62239c1cbff18665e5160caf8dd",
    "d0cb45ff7238fe7719fff22b0595538927a1ff4e56f35c4f3769f98cf4780421",
    "aec1c6e70a90677d76b5ac2e6869298436630925238bf5cc4a37adf20efba741",
    "c3bedc09f4f9f48d9a9ce777aaa653cc0e3b98ed7702e48f11f1e9d075f0859f",
    "20930e5af0be4bcd0abc049a69b01787e3527cb26ff540ee1ca11fd1b6067240",
};

}  // namespace

TEST_CASE("fixture chain is reproducible byte for byte") {
  auto a = testing::write_chain_fixture(testing::scratch_dir("fx-a"));
  auto b = testing::write_chain_fixture(testing::scratch_dir("fx-b"));
  CHECK(slurp(a) == slurp(b));
  CHECK(ledger::validate_chain(ledger::BlockStore(a)).valid);
}

TEST_CASE("fixture hashes match the frozen values") {
  auto file = testing::write_chain_fixture(testing::scratch_dir("fx"));
  ledger::BlockStore store(file);
  REQUIRE(store.height() == kFrozenBlockHashes.size());
  for (std::uint64_t i = 0; i < store.height(); ++i) {
    CHECK(ledger::compute_block_hash(store.at(i).header).hex() == kFrozenBlockHashes[i]);
  }
}

TEST_CASE("external oracle recomputes the same hashes") {
  auto file = testing::write_chain_fixture(testing::scratch_dir("fx"));
  auto agree = testing::compare_with_oracle(file);
  CHECK_MESSAGE(agree.ok, agree.detail);
  CHECK(agree.blocks == 5);
  CHECK(agree.block_hashes == kFrozenBlockHashes);
}

TEST_CASE("external oracle rejects a tampered chain at the right block") {
  auto dir = testing::scratch_dir("fx");
  auto file = testing::write_chain_fixture(dir);
  auto records = ledger::read_block_records(file);
  auto block = Json::parse(records[3]);
  block["header"]["timestamp"] = block["header"]["timestamp"].get<std::int64_t>() + 1;
  records[3] = canonical_dump(block);
  ledger::write_block_records(file, records);

  auto run = testing::run_chain_oracle(file);
  REQUIRE(run.ran);
  CHECK(run.exit_code == 1);
  REQUIRE(run.rows.size() == 4);
  CHECK_FALSE(run.rows[3].ok);

  auto verdict = ledger::validate_records(ledger::read_block_records(file));
  CHECK_FALSE(verdict.valid);
  CHECK(verdict.first_bad_height == 3);
}

TEST_CASE("every single-bit flip is caught at the touched record") {
  auto file = testing::write_chain_fixture(testing::scratch_dir("fx"));
  auto report = testing::mutate_every_byte(file);
  CHECK(report.mutations == std::filesystem::file_size(file));
  CHECK_MESSAGE(report.detected == report.mutations, (report.misses.empty() ? "" : report.misses.front()));
}
