#include "healthledger/gateway/doc_store.hpp"

#include <fstream>
#include <iterator>

#include "healthledger/common/canonical.hpp"
#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"

namespace hl::gateway {

DocStore::DocStore(std::filesystem::path directory, std::size_t limit) : limit_(limit), directory_(directory) {
  std::filesystem::create_directories(directory);
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.path().extension() != ".meta") continue;
    std::ifstream meta(entry.path());
    auto j = Json::parse(meta);
    auto digest = Digest256::from_hex(j.at("digest").get<std::string>());
    std::ifstream in(directory / digest.hex(), std::ios::binary);
    Bytes content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    // Skip anything that no longer matches its name.
    if (crypto::sha256(content) != digest) continue;
    docs_[digest] = OffChainDoc{digest, std::move(content), j.at("media_type").get<std::string>(), 0};
    docs_[digest].size_bytes = docs_[digest].content.size();
  }
}

Digest256 DocStore::put(Bytes content, std::string media_type) {
  if (content.size() > limit_) {
    fail(ErrorKind::SizeLimit, "document of " + std::to_string(content.size()) + " bytes exceeds the " +
                                   std::to_string(limit_) + "-byte limit");
  }
  auto digest = crypto::sha256(content);
  std::lock_guard lock(mutex_);
  if (docs_.contains(digest)) return digest;
  if (directory_) {
    std::ofstream(*directory_ / digest.hex(), std::ios::binary)
        .write(reinterpret_cast<const char*>(content.data()), static_cast<std::streamsize>(content.size()));
    std::ofstream(*directory_ / (digest.hex() + ".meta"))
        << canonical_dump(Json{{"digest", digest.hex()}, {"media_type", media_type}});
  }
  auto size = content.size();
  docs_.emplace(digest, OffChainDoc{digest, std::move(content), std::move(media_type), size});
  return digest;
}

OffChainDoc DocStore::get(const Digest256& digest) const {
  std::lock_guard lock(mutex_);
  auto it = docs_.find(digest);
  if (it == docs_.end()) fail(ErrorKind::NotFound, "no document " + digest.hex());
  return it->second;
}

bool DocStore::contains(const Digest256& digest) const {
  std::lock_guard lock(mutex_);
  return docs_.contains(digest);
}

std::size_t DocStore::size() const {
  std::lock_guard lock(mutex_);
  return docs_.size();
}

}  // namespace hl::gateway
