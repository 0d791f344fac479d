// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "orgym/ran/config.hpp"
#include "orgym/ran/kpm.hpp"
#include "orgym/ran/scheduler.hpp"
#include "orgym/ran/types.hpp"

namespace orgym::ran {

struct UeState {
  UeSpec spec;
  SliceId slice = -1;  // -1: not attached to any slice, never scheduled
  std::int64_t buffer_bytes = 0;
  double efficiency = 0.0;  // current bits per RBG per TTI
  double fading_state = 0.0;
  double pf_average = kPfInitialAverage;
  double arrival_credit_bits = 0.0;

  // Cumulative counters, monotonically non-decreasing.
  std::int64_t offered_bytes = 0;
  std::int64_t tx_bytes = 0;
  std::int64_t tx_tbs = 0;
  std::int64_t rbgs_granted = 0;

  // Values at the start of the current KPM window.
  std::int64_t window_tx_bytes = 0;
  std::int64_t window_tx_tbs = 0;
  std::int64_t window_rbgs = 0;
};

struct ControlOutcome {
  bool applied = false;
  std::optional<Issue> issue;  // set when rejected
  std::int64_t effective_tti = 0;
};

struct ControlLogEntry {
  std::int64_t received_tti = 0;
  std::int64_t effective_tti = 0;
  ControlDirective directive;
  bool applied = false;
  bool no_op = false;
  std::string reason;
};

// One sliced base station advanced one TTI at a time. Copyable: a copy is a
// full snapshot, including RNG state.
class Cell {
 public:
  explicit Cell(ScenarioConfig config);

  void step();
  void run(std::int64_t ttis);

  // Validates and stages `directive`; the new slice table is used from the
  // next TTI on. Rejected directives leave the cell untouched apart from the
  // control log.
  ControlOutcome apply_control(const ControlDirective& directive);

  // True when the TTI just completed closes a KPM window.
  bool window_due() const;
  // Per-UE deltas since the previous call; resets the window baselines.
  std::vector<KpmRecord> emit_kpm_window();

  const ScenarioConfig& config() const { return config_; }
  const SliceTable& slices() const { return table_; }
  // Table in force from the next TTI (pending directive included).
  const SliceTable& next_slices() const { return pending_table_ ? *pending_table_ : table_; }
  const AllocationMap& last_allocation() const { return last_allocation_; }
  std::span<const UeState> ues() const { return ues_; }
  const UeState* find_ue(UeId id) const;
  const std::vector<ControlLogEntry>& control_log() const { return control_log_; }

  std::int64_t tti() const { return tti_; }
  std::int64_t now_ms() const { return tti_ * config_.tti_ms; }
  int ttis_per_window() const { return config_.kpm_window_ms / config_.tti_ms; }

 private:
  void apply_arrivals();
  void advance_channel();

  ScenarioConfig config_;
  SliceTable table_;
  std::optional<SliceTable> pending_table_;
  std::vector<SliceSchedState> sched_state_;  // parallel to table_.slices
  std::vector<UeState> ues_;                   // ascending id
  AllocationMap last_allocation_;
  std::vector<ControlLogEntry> control_log_;
  std::mt19937_64 rng_;
  std::int64_t tti_ = 0;
  std::int64_t window_start_tti_ = 0;
};

}  // namespace orgym::ran
