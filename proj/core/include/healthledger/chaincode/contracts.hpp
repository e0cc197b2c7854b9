#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "healthledger/chaincode/context.hpp"
#include "healthledger/common/canonical.hpp"

namespace hl::chaincode {

/// One row of the authorization table: which stakeholders may call a
/// function at all. Ownership rules (a patient reading only their own
/// complaint, a doctor needing consent) are enforced inside the function.
struct FunctionSpec {
  std::string name;
  std::set<Stakeholder> allowed;
  // Read-only: evaluated at the endorser, never ordered.
  bool query = false;
};

// Every invocable function: health contract, identity system contract and
// the harness key-value contract.
const std::vector<FunctionSpec>& function_table();
const FunctionSpec* find_function(std::string_view name);
bool is_query(std::string_view name);

// Dispatches by name after the table check. Deterministic in (snapshot,
// args, invoker, tx_id, now). Throws hl::Error on any rejection.
Json invoke(std::string_view fn, TxContext& ctx, const Json& args);

}  // namespace hl::chaincode
