#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "healthledger/common/bytes.hpp"

namespace hl::gateway {

inline constexpr std::size_t kDefaultDocLimit = 10 * 1024 * 1024;

struct OffChainDoc {
  Digest256 digest;
  Bytes content;
  std::string media_type;
  std::size_t size_bytes = 0;
};

/// Content-addressed store for bulky records kept off the ledger. Blocks
/// reference documents by digest only.
class DocStore {
 public:
  explicit DocStore(std::size_t limit = kDefaultDocLimit) : limit_(limit) {}
  // With a directory each document is mirrored to `<dir>/<hex digest>`.
  DocStore(std::filesystem::path directory, std::size_t limit = kDefaultDocLimit);

  // Idempotent; throws SizeLimit.
  Digest256 put(Bytes content, std::string media_type);
  // Throws NotFound.
  OffChainDoc get(const Digest256& digest) const;
  bool contains(const Digest256& digest) const;
  std::size_t size() const;

 private:
  std::size_t limit_;
  std::optional<std::filesystem::path> directory_;
  std::map<Digest256, OffChainDoc> docs_;
  mutable std::mutex mutex_;
};

}  // namespace hl::gateway
