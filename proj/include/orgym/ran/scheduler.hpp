// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "orgym/ran/types.hpp"

namespace orgym::ran {

inline constexpr double kPfSmoothing = 0.01;  // per-TTI weight of the newest sample
inline constexpr double kPfInitialAverage = 1.0;

// Per-UE view handed to a slice scheduler for one TTI.
struct SchedUe {
  UeId id = 0;
  double efficiency = 0.0;        // bits per RBG this TTI
  std::int64_t buffer_bits = 0;   // backlog at the start of the TTI
  double pf_average = kPfInitialAverage;
};

// State a slice scheduler keeps between TTIs.
struct SliceSchedState {
  std::size_t rr_next = 0;  // position of the next UE in round-robin order
};

// Assigns the RBGs of `range` to `ues` (sorted by ascending id) under
// `policy`, writing owners into `out`. A UE stays eligible while the bits
// already granted this TTI are below its backlog; RBGs nobody can use stay
// idle. Ties go to the lowest UE id.
//   round-robin:   cyclic pointer over eligible UEs, persisted in `state`.
//   waterfilling:  next RBG to the eligible UE with the fewest bits granted
//                  so far this TTI.
//   prop. fair:    next RBG to argmax efficiency / pf_average.
void allocate_slice(SliceSchedState& state, RbgRange range, SchedPolicy policy,
                    std::span<const SchedUe> ues, AllocationMap& out);

// Exponential smoothing used by the PF metric.
inline double pf_update(double average, double served_bits) {
  return (1.0 - kPfSmoothing) * average + kPfSmoothing * served_bits;
}

}  // namespace orgym::ran
