#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "healthledger/ledger/block.hpp"

namespace hl::ledger {

/// Append-only chain of blocks. Optionally backed by a file holding one
/// record per block: a 4-byte big-endian length followed by the canonical
/// block encoding.
class BlockStore {
 public:
  // In-memory store.
  BlockStore() = default;
  // File-backed store; creates the file if missing. Existing records are
  // loaded as-is without validation (see validate_chain).
  explicit BlockStore(std::filesystem::path file);

  std::uint64_t height() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }
  const Block& at(std::uint64_t number) const { return blocks_.at(number); }
  const Block& tip() const { return blocks_.back(); }
  const std::vector<Block>& blocks() const { return blocks_; }

  // Raw record bytes as stored; an unparseable record is kept as raw text
  // and stops decoding of everything after it.
  const std::vector<std::string>& records() const { return records_; }
  bool truncated() const { return truncated_; }

  // Throws Error{Height | ChainLink | Oversize} if the block cannot follow
  // the current tip.
  void check_appendable(const Block& block) const;
  // Validates, persists, then returns the new height.
  std::uint64_t append(const Block& block);

  const std::optional<std::filesystem::path>& file() const { return file_; }

 private:
  std::optional<std::filesystem::path> file_;
  std::vector<std::string> records_;
  std::vector<Block> blocks_;
  bool truncated_ = false;
};

std::uint64_t append_block(BlockStore& store, const Block& block);

std::string block_file_name(std::string_view channel);

// Raw record access, also used by tests that tamper with files.
std::vector<std::string> read_block_records(const std::filesystem::path& file, bool* truncated = nullptr);
void write_block_records(const std::filesystem::path& file, const std::vector<std::string>& records);

}  // namespace hl::ledger
