#pragma once

// Pure decision rules used by the health contract. Kept apart from the
// contract plumbing so they can be checked against brute-force oracles.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hl::chaincode {

enum class Severity { Low = 0, Medium = 1, High = 2 };

std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view text);

struct ComplaintKey {
  std::string complaint_id;
  Severity severity = Severity::Low;
  std::int64_t filed_at = 0;
};

// Priority order: severity descending, then filed_at ascending, then id.
// Returns complaint_id -> rank (1 = most urgent).
std::map<std::string, std::uint32_t> rank_complaints(std::vector<ComplaintKey> unresolved);

struct MedicineFacts {
  std::string medicine_id;
  std::vector<std::string> contraindications;
};

// "allergy:<M>" for every prescribed medicine in the allergy list, and
// "interaction:<A>+<B>" for every item pair (i < j) where either lists the
// other as a contraindication. Order follows item order.
std::vector<std::string> threat_warnings(const std::vector<std::string>& item_medicines,
                                         const std::set<std::string>& allergies,
                                         const std::map<std::string, MedicineFacts>& registry);

inline constexpr std::size_t kAnonymityThreshold = 5;
inline constexpr std::int64_t kDefaultConsentTtlMs = 24LL * 60 * 60 * 1000;

}  // namespace hl::chaincode
