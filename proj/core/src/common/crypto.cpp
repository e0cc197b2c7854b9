#include "healthledger/common/crypto.hpp"

#include <memory>

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include "healthledger/common/error.hpp"

namespace hl::crypto {

namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

[[noreturn]] void openssl_failure(const char* what) {
  throw std::runtime_error(std::string("openssl: ") + what);
}

}  // namespace

Digest256 sha256(ByteView data) {
  std::array<std::uint8_t, Digest256::kSize> out{};
  SHA256(data.data(), data.size(), out.data());
  return Digest256{out};
}

KeyPair KeyPair::generate() { return from_seed(random_bytes(kSeedSize)); }

KeyPair KeyPair::from_seed(ByteView seed) {
  if (seed.size() != kSeedSize) fail(ErrorKind::Validation, "Ed25519 seed must be 32 bytes");
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
  if (!key) openssl_failure("EVP_PKEY_new_raw_private_key");
  KeyPair kp;
  kp.seed_.assign(seed.begin(), seed.end());
  kp.public_key_.resize(kPublicKeySize);
  std::size_t len = kPublicKeySize;
  if (EVP_PKEY_get_raw_public_key(key.get(), kp.public_key_.data(), &len) != 1 || len != kPublicKeySize) {
    openssl_failure("EVP_PKEY_get_raw_public_key");
  }
  return kp;
}

Bytes KeyPair::sign(ByteView message) const {
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed_.data(), seed_.size()));
  if (!key) openssl_failure("EVP_PKEY_new_raw_private_key");
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) {
    openssl_failure("EVP_DigestSignInit");
  }
  Bytes sig(kSignatureSize);
  std::size_t len = sig.size();
  if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1) {
    openssl_failure("EVP_DigestSign");
  }
  sig.resize(len);
  return sig;
}

bool verify(ByteView public_key, ByteView message, ByteView signature) {
  if (public_key.size() != kPublicKeySize || signature.size() != kSignatureSize) return false;
  PkeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, public_key.data(), public_key.size()));
  if (!key) return false;
  MdCtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) != 1) return false;
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(), message.size()) == 1;
}

Bytes random_bytes(std::size_t n) {
  Bytes out(n);
  if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1) openssl_failure("RAND_bytes");
  return out;
}

Digest256 password_digest(std::string_view password, ByteView salt, int iterations) {
  std::array<std::uint8_t, Digest256::kSize> out{};
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), iterations, EVP_sha256(),
                        static_cast<int>(out.size()), out.data()) != 1) {
    openssl_failure("PKCS5_PBKDF2_HMAC");
  }
  return Digest256{out};
}

Bytes DeterministicRng::bytes(std::size_t n) {
  Bytes out(n);
  for (std::size_t i = 0; i < n; i += 8) {
    auto word = engine_();
    for (std::size_t j = 0; j < 8 && i + j < n; ++j) out[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
  }
  return out;
}

std::int64_t DeterministicRng::uniform(std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

}  // namespace hl::crypto
