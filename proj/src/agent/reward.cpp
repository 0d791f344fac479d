// SPDX-License-Identifier: Apache-2.0
#include "orgym/agent/reward.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "orgym/common/error.hpp"

namespace orgym::agent {

void validate(const RewardWeights& w) {
  if (!(w.w_thr >= 0.0) || !(w.w_buf >= 0.0) || std::abs(w.w_thr + w.w_buf - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidValue, "weights", "w_thr and w_buf must be non-negative and sum to 1");
  }
  if (!(w.tb_ref > 0.0) || !(w.buf_ref > 0.0)) {
    throw Error(ErrorCode::kInvalidValue, "weights", "reference constants must be positive");
  }
}

double reward_value(double tbs, double buf, const RewardWeights& w) {
  return w.w_thr * std::min(tbs / w.tb_ref, 1.0) - w.w_buf * std::min(buf / w.buf_ref, 1.0);
}

EpochMetrics epoch_metrics(std::span<const ran::KpmRecord> records, ran::SliceId broadband,
                           ran::SliceId timesensitive) {
  std::set<std::int64_t> windows;
  bool seen_bb = false;
  bool seen_ts = false;
  double tbs = 0.0;
  double buf = 0.0;
  for (const auto& r : records) {
    windows.insert(r.ts_ms);
    if (r.slice_id == broadband) {
      seen_bb = true;
      tbs += static_cast<double>(r.dl_tx_tbs);
    }
    if (r.slice_id == timesensitive) {
      seen_ts = true;
      buf += static_cast<double>(r.dl_buffer_bytes);
    }
  }
  if (!seen_bb) throw Error(ErrorCode::kMissingSlice, "broadband", "no records for slice " + std::to_string(broadband));
  if (!seen_ts) {
    throw Error(ErrorCode::kMissingSlice, "time-sensitive", "no records for slice " + std::to_string(timesensitive));
  }
  const auto n = static_cast<double>(windows.size());
  return EpochMetrics{tbs / n, buf / n, static_cast<int>(windows.size())};
}

double compute_reward(std::span<const ran::KpmRecord> records, const RewardWeights& w, ran::SliceId broadband,
                      ran::SliceId timesensitive) {
  validate(w);
  const auto m = epoch_metrics(records, broadband, timesensitive);
  return reward_value(m.broadband_tbs, m.timesensitive_buffer, w);
}

}  // namespace orgym::agent
