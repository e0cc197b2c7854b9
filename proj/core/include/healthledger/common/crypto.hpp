#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "healthledger/common/bytes.hpp"

namespace hl::crypto {

Digest256 sha256(ByteView data);
inline Digest256 sha256(std::string_view text) { return sha256(as_bytes(text)); }

inline constexpr std::string_view kSignatureAlgorithm = "Ed25519";
inline constexpr std::size_t kPublicKeySize = 32;
inline constexpr std::size_t kSeedSize = 32;
inline constexpr std::size_t kSignatureSize = 64;

/// Ed25519 key pair. The private half is the 32-byte seed; signing is
/// deterministic, so equal seed and message always give equal signatures.
class KeyPair {
 public:
  static KeyPair generate();
  static KeyPair from_seed(ByteView seed);

  const Bytes& public_key() const { return public_key_; }
  const Bytes& seed() const { return seed_; }

  Bytes sign(ByteView message) const;

 private:
  Bytes seed_;
  Bytes public_key_;
};

bool verify(ByteView public_key, ByteView message, ByteView signature);

Bytes random_bytes(std::size_t n);

// PBKDF2-HMAC-SHA256.
Digest256 password_digest(std::string_view password, ByteView salt, int iterations);

/// Seeded byte source for the deterministic harness: keys, nonces and
/// latencies all come from here when a run must be reproducible.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  Bytes bytes(std::size_t n);
  std::uint64_t next() { return engine_(); }
  // Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hl::crypto
