#include "healthledger/chaincode/health_rules.hpp"

#include <algorithm>

namespace hl::chaincode {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Low: return "low";
    case Severity::Medium: return "medium";
    case Severity::High: return "high";
  }
  return "low";
}

std::optional<Severity> parse_severity(std::string_view text) {
  if (text == "low") return Severity::Low;
  if (text == "medium") return Severity::Medium;
  if (text == "high") return Severity::High;
  return std::nullopt;
}

std::map<std::string, std::uint32_t> rank_complaints(std::vector<ComplaintKey> unresolved) {
  std::sort(unresolved.begin(), unresolved.end(), [](const ComplaintKey& a, const ComplaintKey& b) {
    if (a.severity != b.severity) return a.severity > b.severity;
    if (a.filed_at != b.filed_at) return a.filed_at < b.filed_at;
    return a.complaint_id < b.complaint_id;
  });
  std::map<std::string, std::uint32_t> ranks;
  for (std::size_t i = 0; i < unresolved.size(); ++i) {
    ranks[unresolved[i].complaint_id] = static_cast<std::uint32_t>(i + 1);
  }
  return ranks;
}

namespace {

bool lists(const std::map<std::string, MedicineFacts>& registry, const std::string& a, const std::string& b) {
  auto it = registry.find(a);
  if (it == registry.end()) return false;
  const auto& c = it->second.contraindications;
  return std::find(c.begin(), c.end(), b) != c.end();
}

}  // namespace

std::vector<std::string> threat_warnings(const std::vector<std::string>& item_medicines,
                                         const std::set<std::string>& allergies,
                                         const std::map<std::string, MedicineFacts>& registry) {
  std::vector<std::string> warnings;
  for (const auto& m : item_medicines) {
    if (allergies.contains(m)) warnings.push_back("allergy:" + m);
  }
  for (std::size_t i = 0; i < item_medicines.size(); ++i) {
    for (std::size_t j = i + 1; j < item_medicines.size(); ++j) {
      const auto& a = item_medicines[i];
      const auto& b = item_medicines[j];
      if (lists(registry, a, b) || lists(registry, b, a)) warnings.push_back("interaction:" + a + "+" + b);
    }
  }
  return warnings;
}

}  // namespace hl::chaincode
