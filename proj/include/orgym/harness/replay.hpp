// SPDX-License-Identifier: Apache-2.0
// Offline replay of recorded KPM CSVs.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "orgym/ran/kpm.hpp"
#include "orgym/ric/ric.hpp"

namespace orgym::harness {

struct ReplayOptions {
  // Simulated ms per wall-clock ms; 0 replays as fast as possible.
  double speed = 0.0;
};

using WindowSink = std::function<void(const std::vector<ran::KpmRecord>& window)>;

// Merges the files, orders windows by ts_ms (file order, then row order,
// within a timestamp) and hands each (ts_ms, bs_id) window to the sink.
// Returns the number of windows. Throws Error(kSchemaMismatch) for a CSV
// whose header is not the KPM header.
std::size_t replay_dataset(const std::vector<std::string>& csv_paths, const WindowSink& sink,
                           const ReplayOptions& options = {});

// Packs replayed windows into indications of `windows_per_indication`
// windows each (sequence numbers from 0) for an xApp or any other sink.
std::size_t replay_indications(const std::vector<std::string>& csv_paths, ric::XappSink& sink,
                               int windows_per_indication, const ReplayOptions& options = {});

}  // namespace orgym::harness
