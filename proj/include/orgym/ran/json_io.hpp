// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "orgym/ran/kpm.hpp"
#include "orgym/ran/types.hpp"

namespace orgym::ran {

// Allocation maps use string slice-id keys: {"0":[0,5],"1":[6,10]}.
nlohmann::json allocation_to_json(const std::map<SliceId, RbgRange>& allocation);
// Throws orgym::Error (kMalformedJson / kRangeOutOfBounds) naming `key`.
std::map<SliceId, RbgRange> allocation_from_json(const nlohmann::json& j, const std::string& key);

nlohmann::json directive_to_json(const ControlDirective& directive);
ControlDirective directive_from_json(const nlohmann::json& j);

nlohmann::json kpm_to_json(const KpmRecord& record);
KpmRecord kpm_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const nlohmann::json& j);

}  // namespace orgym::ran
