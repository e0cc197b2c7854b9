#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hl {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);
// Accepts lowercase or uppercase hex; throws Error{Validation} on bad input.
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// 32-byte SHA-256 digest. Encoded everywhere as 64 lowercase hex chars.
class Digest256 {
 public:
  static constexpr std::size_t kSize = 32;

  Digest256() = default;
  explicit Digest256(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

  static Digest256 zero() { return Digest256{}; }
  static Digest256 from_hex(std::string_view hex);

  std::string hex() const { return to_hex(bytes_); }
  bool is_zero() const;

  const std::array<std::uint8_t, kSize>& bytes() const { return bytes_; }
  std::array<std::uint8_t, kSize>& mutable_bytes() { return bytes_; }

  auto operator<=>(const Digest256&) const = default;

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

}  // namespace hl

template <>
struct std::hash<hl::Digest256> {
  std::size_t operator()(const hl::Digest256& d) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t); ++i) h = (h << 8) | d.bytes()[i];
    return h;
  }
};
