// SPDX-License-Identifier: Apache-2.0
#include "orgym/ran/scheduler.hpp"

#include <algorithm>
#include <vector>

namespace orgym::ran {
namespace {

constexpr double kPfAverageFloor = 1e-12;

struct Grant {
  int rbgs = 0;
  double bits = 0.0;
};

bool eligible(const SchedUe& ue, const Grant& g) {
  return g.bits < static_cast<double>(ue.buffer_bits);
}

}  // namespace

void allocate_slice(SliceSchedState& state, RbgRange range, SchedPolicy policy,
                    std::span<const SchedUe> ues, AllocationMap& out) {
  const std::size_t n = ues.size();
  if (n == 0) return;
  std::vector<Grant> grants(n);

  auto grant = [&](std::size_t i, int rbg) {
    out.owner[static_cast<std::size_t>(rbg)] = ues[i].id;
    grants[i].rbgs += 1;
    grants[i].bits += ues[i].efficiency;
  };

  for (int rbg = range.first; rbg <= range.last; ++rbg) {
    std::size_t pick = n;
    switch (policy) {
      case SchedPolicy::kRoundRobin: {
        const std::size_t start = state.rr_next % n;
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t i = (start + k) % n;
          if (eligible(ues[i], grants[i])) {
            pick = i;
            break;
          }
        }
        if (pick != n) state.rr_next = (pick + 1) % n;
        break;
      }
      case SchedPolicy::kWaterfilling: {
        for (std::size_t i = 0; i < n; ++i) {
          if (!eligible(ues[i], grants[i])) continue;
          if (pick == n || grants[i].bits < grants[pick].bits) pick = i;
        }
        break;
      }
      case SchedPolicy::kProportionalFair: {
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!eligible(ues[i], grants[i])) continue;
          const double metric = ues[i].efficiency / std::max(ues[i].pf_average, kPfAverageFloor);
          if (pick == n || metric > best) {
            pick = i;
            best = metric;
          }
        }
        break;
      }
    }
    if (pick == n) return;  // nobody left with backlog; remaining RBGs idle
    grant(pick, rbg);
  }
}

}  // namespace orgym::ran
