#include "healthledger/ledger/block_store.hpp"

#include <fstream>

#include "healthledger/common/error.hpp"

namespace hl::ledger {

namespace {

void put_length(std::string& out, std::uint32_t n) {
  out.push_back(static_cast<char>((n >> 24) & 0xff));
  out.push_back(static_cast<char>((n >> 16) & 0xff));
  out.push_back(static_cast<char>((n >> 8) & 0xff));
  out.push_back(static_cast<char>(n & 0xff));
}

std::string frame(const std::string& record) {
  std::string out;
  out.reserve(record.size() + 4);
  put_length(out, static_cast<std::uint32_t>(record.size()));
  out += record;
  return out;
}

}  // namespace

std::vector<std::string> read_block_records(const std::filesystem::path& file, bool* truncated) {
  std::vector<std::string> records;
  if (truncated) *truncated = false;
  std::ifstream in(file, std::ios::binary);
  if (!in) return records;
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  while (pos < data.size()) {
    if (data.size() - pos < 4) {
      if (truncated) *truncated = true;
      break;
    }
    auto b = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])); };
    std::uint32_t len = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
    pos += 4;
    if (data.size() - pos < len) {
      if (truncated) *truncated = true;
      break;
    }
    records.push_back(data.substr(pos, len));
    pos += len;
  }
  return records;
}

void write_block_records(const std::filesystem::path& file, const std::vector<std::string>& records) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + file.string());
  for (const auto& r : records) out << frame(r);
  if (!out.flush()) fail(ErrorKind::Io, "short write to " + file.string());
}

BlockStore::BlockStore(std::filesystem::path file) : file_(std::move(file)) {
  if (!std::filesystem::exists(*file_)) {
    std::ofstream create(*file_, std::ios::binary);
    if (!create) fail(ErrorKind::Io, "cannot create " + file_->string());
    return;
  }
  records_ = read_block_records(*file_, &truncated_);
  for (const auto& r : records_) {
    try {
      blocks_.push_back(Block::decode(r));
    } catch (const Error&) {
      truncated_ = true;
      break;
    }
  }
}

void BlockStore::check_appendable(const Block& block) const {
  if (truncated_) fail(ErrorKind::ChainLink, "store holds an unreadable record; refusing to append");
  auto expected = height();
  if (block.header.number != expected) {
    fail(ErrorKind::Height,
         "block number " + std::to_string(block.header.number) + " but next height is " + std::to_string(expected));
  }
  auto expected_prev = blocks_.empty() ? Digest256::zero() : compute_block_hash(blocks_.back().header);
  if (block.header.prev_hash != expected_prev) {
    fail(ErrorKind::ChainLink, "prev_hash does not match block " + std::to_string(expected - 1));
  }
  if (committed_size(block) > kMaxBlockBytes) {
    fail(ErrorKind::Oversize, "block encoding exceeds " + std::to_string(kMaxBlockBytes) + " bytes");
  }
}

std::uint64_t BlockStore::append(const Block& block) {
  check_appendable(block);
  auto record = block.encode();
  if (file_) {
    std::ofstream out(*file_, std::ios::binary | std::ios::app);
    if (!out) fail(ErrorKind::Io, "cannot open " + file_->string());
    out << frame(record);
    if (!out.flush()) fail(ErrorKind::Io, "short write to " + file_->string());
  }
  records_.push_back(std::move(record));
  blocks_.push_back(block);
  return height();
}

std::uint64_t append_block(BlockStore& store, const Block& block) { return store.append(block); }

std::string block_file_name(std::string_view channel) { return "chain-" + std::string(channel) + ".blocks"; }

}  // namespace hl::ledger
