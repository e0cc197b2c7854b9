#pragma once

// Canonical encoding: JSON objects with lexicographically sorted keys, no
// insignificant whitespace, UTF-8 strings, integers only, lowercase-hex
// binary fields. Any two encoders that follow those rules agree byte for
// byte, which is what makes hashes reproducible outside this codebase.

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "healthledger/common/bytes.hpp"

namespace hl {

using Json = nlohmann::json;

std::string canonical_dump(const Json& value);
// Throws Error{Validation} if the text is not valid JSON.
Json canonical_parse(std::string_view text);

Digest256 digest_of(const Json& value);

// Helpers for required fields with a readable error.
const Json& require(const Json& object, std::string_view key);
std::string require_string(const Json& object, std::string_view key);
std::int64_t require_int(const Json& object, std::string_view key);
std::uint64_t require_uint(const Json& object, std::string_view key);

}  // namespace hl
