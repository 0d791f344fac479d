// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "orgym/ran/kpm.hpp"

namespace orgym::agent {

struct RewardWeights {
  double w_thr = 0.5;      // broadband TX-TB term
  double w_buf = 0.5;      // time-sensitive buffer term
  double tb_ref = 1.0;     // TBs per window
  double buf_ref = 1.0;    // bytes
};

// Throws Error(kInvalidValue) unless weights are >= 0, sum to 1 and the
// references are positive.
void validate(const RewardWeights& w);

// r = w_thr * min(tbs / tb_ref, 1) - w_buf * min(buf / buf_ref, 1)
double reward_value(double broadband_tbs, double timesensitive_buffer, const RewardWeights& w);

struct EpochMetrics {
  double broadband_tbs = 0.0;         // mean per window of the slice's TX TBs
  double timesensitive_buffer = 0.0;  // mean per window of the slice's buffered bytes
  int windows = 0;
};

// Throws Error(kMissingSlice) when either slice has no record.
EpochMetrics epoch_metrics(std::span<const ran::KpmRecord> records, ran::SliceId broadband,
                           ran::SliceId timesensitive);

double compute_reward(std::span<const ran::KpmRecord> records, const RewardWeights& w, ran::SliceId broadband,
                      ran::SliceId timesensitive);

}  // namespace orgym::agent
