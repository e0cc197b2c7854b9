#include "healthledger/common/canonical.hpp"

#include "healthledger/common/crypto.hpp"
#include "healthledger/common/error.hpp"

namespace hl {

std::string canonical_dump(const Json& value) {
  try {
    // nlohmann::json keeps object keys in a std::map, so the dump is
    // already key-sorted.
    return value.dump(-1, ' ', false, Json::error_handler_t::strict);
  } catch (const Json::exception& e) {
    fail(ErrorKind::Validation, std::string("cannot encode: ") + e.what());
  }
}

Json canonical_parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::Validation, std::string("malformed document: ") + e.what());
  }
}

Digest256 digest_of(const Json& value) { return crypto::sha256(canonical_dump(value)); }

const Json& require(const Json& object, std::string_view key) {
  if (!object.is_object()) fail(ErrorKind::Validation, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) fail(ErrorKind::Validation, "missing field '" + std::string(key) + "'");
  return *it;
}

std::string require_string(const Json& object, std::string_view key) {
  const auto& v = require(object, key);
  if (!v.is_string()) fail(ErrorKind::Validation, "field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

std::int64_t require_int(const Json& object, std::string_view key) {
  const auto& v = require(object, key);
  if (!v.is_number_integer()) fail(ErrorKind::Validation, "field '" + std::string(key) + "' must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t require_uint(const Json& object, std::string_view key) {
  const auto& v = require(object, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    fail(ErrorKind::Validation, "field '" + std::string(key) + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace hl
