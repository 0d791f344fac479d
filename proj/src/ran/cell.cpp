// SPDX-License-Identifier: Apache-2.0
#include "orgym/ran/cell.hpp"

#include <algorithm>
#include <cmath>

namespace orgym::ran {

Cell::Cell(ScenarioConfig config)
    : config_(std::move(config)), last_allocation_(config_.rbg_count), rng_(config_.seed) {
  if (auto issue = validate_config(config_)) throw issue->to_error();
  table_ = config_.slice_table();
  sched_state_.assign(table_.slices.size(), SliceSchedState{});

  ues_.reserve(config_.ues.size());
  for (const auto& spec : config_.ues) {
    UeState ue;
    ue.spec = spec;
    ue.efficiency = spec.efficiency;
    ues_.push_back(ue);
  }
  std::sort(ues_.begin(), ues_.end(), [](const UeState& a, const UeState& b) { return a.spec.id < b.spec.id; });
  for (const auto& slice : table_.slices) {
    for (UeId id : slice.ues) {
      auto it = std::lower_bound(ues_.begin(), ues_.end(), id,
                                 [](const UeState& u, UeId v) { return u.spec.id < v; });
      it->slice = slice.id;
    }
  }
}

const UeState* Cell::find_ue(UeId id) const {
  auto it = std::lower_bound(ues_.begin(), ues_.end(), id, [](const UeState& u, UeId v) { return u.spec.id < v; });
  if (it == ues_.end() || it->spec.id != id) return nullptr;
  return &*it;
}

void Cell::apply_arrivals() {
  for (auto& ue : ues_) {
    if (ue.spec.saturated) {
      if (ue.buffer_bytes < kSaturatedBufferBytes) {
        ue.offered_bytes += kSaturatedBufferBytes - ue.buffer_bytes;
        ue.buffer_bytes = kSaturatedBufferBytes;
      }
      continue;
    }
    ue.arrival_credit_bits += ue.spec.traffic_bps * config_.tti_ms / 1000.0;
    const auto bytes = static_cast<std::int64_t>(ue.arrival_credit_bits / 8.0);
    if (bytes > 0) {
      ue.arrival_credit_bits -= static_cast<double>(bytes) * 8.0;
      ue.buffer_bytes += bytes;
      ue.offered_bytes += bytes;
    }
  }
}

void Cell::advance_channel() {
  if (!config_.channel.fading) return;
  std::normal_distribution<double> noise(0.0, 1.0);
  const double rho = config_.channel.coefficient;
  for (auto& ue : ues_) {
    ue.fading_state = rho * ue.fading_state + config_.channel.sigma * noise(rng_);
    ue.efficiency = ue.spec.efficiency * std::exp(ue.fading_state);
  }
}

void Cell::step() {
  if (pending_table_) {
    table_ = std::move(*pending_table_);
    pending_table_.reset();
  }

  apply_arrivals();

  AllocationMap alloc(config_.rbg_count);
  std::vector<SchedUe> view;
  for (std::size_t s = 0; s < table_.slices.size(); ++s) {
    const auto& slice = table_.slices[s];
    view.clear();
    for (UeId id : slice.ues) {
      const UeState* ue = find_ue(id);
      view.push_back(SchedUe{id, ue->efficiency, ue->buffer_bytes * 8, ue->pf_average});
    }
    allocate_slice(sched_state_[s], slice.range, slice.policy, view, alloc);
  }

  for (auto& ue : ues_) {
    const int rbgs = ue.slice < 0 ? 0 : alloc.granted_to(ue.spec.id);
    std::int64_t sent = 0;
    if (rbgs > 0) {
      const auto capacity = static_cast<std::int64_t>(std::floor(rbgs * ue.efficiency / 8.0));
      sent = std::min(capacity, ue.buffer_bytes);
      ue.buffer_bytes -= sent;
      ue.tx_bytes += sent;
      ue.tx_tbs += 1;
      ue.rbgs_granted += rbgs;
    }
    if (ue.slice >= 0) ue.pf_average = pf_update(ue.pf_average, static_cast<double>(sent) * 8.0);
  }

  last_allocation_ = std::move(alloc);
  advance_channel();
  ++tti_;
}

void Cell::run(std::int64_t ttis) {
  for (std::int64_t i = 0; i < ttis; ++i) step();
}

ControlOutcome Cell::apply_control(const ControlDirective& directive) {
  ControlOutcome outcome;
  outcome.effective_tti = tti_;
  ControlLogEntry entry{tti_, tti_, directive, false, false, {}};

  SliceTable merged;
  if (auto issue = merge_directive(next_slices(), directive, config_.rbg_count, merged)) {
    outcome.issue = issue;
    entry.reason = std::string(to_string(issue->code));
    control_log_.push_back(std::move(entry));
    return outcome;
  }
  outcome.applied = true;
  entry.applied = true;
  entry.no_op = merged == next_slices();
  if (!entry.no_op) pending_table_ = std::move(merged);
  control_log_.push_back(std::move(entry));
  return outcome;
}

bool Cell::window_due() const {
  return tti_ > window_start_tti_ && (tti_ - window_start_tti_) % ttis_per_window() == 0;
}

std::vector<KpmRecord> Cell::emit_kpm_window() {
  const std::int64_t window_ttis = tti_ - window_start_tti_;
  const std::int64_t window_ms = window_ttis * config_.tti_ms;
  std::vector<KpmRecord> out;
  out.reserve(ues_.size());
  for (auto& ue : ues_) {
    KpmRecord r;
    r.ts_ms = now_ms();
    r.bs_id = config_.bs_id;
    r.slice_id = ue.slice;
    r.ue_id = ue.spec.id;
    r.dl_tx_bytes = ue.tx_bytes - ue.window_tx_bytes;
    r.dl_tx_tbs = ue.tx_tbs - ue.window_tx_tbs;
    r.dl_buffer_bytes = ue.buffer_bytes;
    r.dl_thr_mbps = window_ms > 0 ? throughput_mbps(r.dl_tx_bytes, window_ms) : 0.0;
    const std::int64_t rbgs = ue.rbgs_granted - ue.window_rbgs;
    r.rbg_share = window_ttis > 0
                      ? quantize_micro(static_cast<double>(rbgs) /
                                       static_cast<double>(config_.rbg_count * window_ttis))
                      : 0.0;
    const SliceEntry* slice = table_.find(ue.slice);
    r.sched_policy = slice != nullptr ? static_cast<int>(slice->policy) : 0;
    out.push_back(std::move(r));

    ue.window_tx_bytes = ue.tx_bytes;
    ue.window_tx_tbs = ue.tx_tbs;
    ue.window_rbgs = ue.rbgs_granted;
  }
  window_start_tti_ = tti_;
  return out;
}

}  // namespace orgym::ran
