#pragma once

#include <string>

#include <json.hpp>

#include "mechgap/distributions.hpp"
#include "mechgap/mechanisms.hpp"

namespace mechgap {

// Wire format:
//   {"type":"triangular","v":<num>,"q":<num>} | {"type":"tri_inf"} |
//   {"type":"equal_revenue","t":<num>} | {"type":"root_irregular","n":<int>}
// Instance: {"buyers":[...]}  (extra keys ignored on input)
// SpmPolicy: {"order":[...],"prices":[...]}, +inf prices encoded as "inf"

nlohmann::json to_json(const DistributionSpec& d);
DistributionSpec distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SpmPolicy& policy);
SpmPolicy policy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RevenueReport& rep);

/// Parse an instance from a file path, or from stdin when path is "-".
Instance load_instance(const std::string& path);

}  // namespace mechgap
