// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "orgym/common/error.hpp"
#include "orgym/ran/types.hpp"

namespace orgym::ran {

struct Issue {
  ErrorCode code;
  std::string key;
  std::string detail;

  Error to_error() const { return Error(code, key, detail); }
};

// Parses a SCOPE-style radio config. Missing optional keys take defaults:
// slicing is on iff "slice-allocation" is present, policies default to 0,
// and when "ues" is absent every UE listed in "slice-users" is synthesized
// as a saturated UE at kDefaultEfficiency. Throws orgym::Error.
ScenarioConfig parse_radio_config(std::string_view json_text);

// Canonical JSON text using the same keys parse_radio_config accepts.
std::string radio_config_to_json(const ScenarioConfig& config);

std::optional<Issue> validate_config(const ScenarioConfig& config);

// Checks ranges against [0, rbg_count), pairwise disjointness and policy codes.
std::optional<Issue> validate_allocation(const std::map<SliceId, RbgRange>& allocation,
                                         int rbg_count);

// Applies a directive on top of `current`. On success writes the merged table
// to `out`; otherwise `out` is untouched and the first violation is returned.
std::optional<Issue> merge_directive(const SliceTable& current, const ControlDirective& directive,
                                     int rbg_count, SliceTable& out);

}  // namespace orgym::ran
