// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace orgym::ran {

using UeId = int;
using SliceId = int;

inline constexpr int kDefaultRbgCount = 17;  // 50 PRBs at 10 MHz, 3 PRBs per RBG
inline constexpr int kDefaultKpmWindowMs = 100;
inline constexpr double kDefaultEfficiency = 1000.0;  // bits per RBG per TTI
inline constexpr std::int64_t kSaturatedBufferBytes = 1 << 20;
inline constexpr const char* kDefaultBsId = "gnb:311-048-01000501";

enum class SchedPolicy : int {
  kRoundRobin = 0,
  kWaterfilling = 1,
  kProportionalFair = 2,
};

inline bool is_known_policy(int code) { return code >= 0 && code <= 2; }

// Inclusive RBG range [first, last].
struct RbgRange {
  int first = 0;
  int last = 0;

  int size() const { return last - first + 1; }
  bool contains(int rbg) const { return rbg >= first && rbg <= last; }
  bool overlaps(const RbgRange& other) const {
    return first <= other.last && other.first <= last;
  }
  friend bool operator==(const RbgRange&, const RbgRange&) = default;
};

struct UeSpec {
  UeId id = 0;
  double efficiency = kDefaultEfficiency;  // bits per RBG per TTI
  double traffic_bps = 0.0;                // CBR offered load when not saturated
  bool saturated = true;

  friend bool operator==(const UeSpec&, const UeSpec&) = default;
};

// Optional AR(1) log-domain fading on top of the per-UE base efficiency.
struct ChannelSpec {
  bool fading = false;
  double coefficient = 0.99;
  double sigma = 0.0;

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

struct SliceEntry {
  SliceId id = 0;
  RbgRange range;
  SchedPolicy policy = SchedPolicy::kRoundRobin;
  std::vector<UeId> ues;  // ascending

  friend bool operator==(const SliceEntry&, const SliceEntry&) = default;
};

// Active slice configuration, ordered by slice id.
struct SliceTable {
  std::vector<SliceEntry> slices;

  const SliceEntry* find(SliceId id) const;
  SliceEntry* find(SliceId id);
  friend bool operator==(const SliceTable&, const SliceTable&) = default;
};

struct ScenarioConfig {
  bool network_slicing = false;
  int rbg_count = kDefaultRbgCount;
  std::map<SliceId, RbgRange> slice_allocation;
  std::vector<int> slice_scheduling_policy;  // indexed by slice position, ascending id
  std::map<SliceId, std::vector<UeId>> slice_users;
  std::vector<UeSpec> ues;
  ChannelSpec channel;
  int tti_ms = 1;
  int kpm_window_ms = kDefaultKpmWindowMs;
  std::uint64_t seed = 1;
  std::string bs_id = kDefaultBsId;

  // Slice table implied by the config; a single slice 0 spanning every RBG
  // when slicing is disabled.
  SliceTable slice_table() const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Run-time reconfiguration. Policy codes stay raw ints so that an unknown
// code can travel over the wire and be rejected by the base station.
struct ControlDirective {
  std::string target;
  std::optional<std::map<SliceId, RbgRange>> slice_allocation;
  std::optional<std::vector<int>> slice_scheduling_policy;

  bool empty() const { return !slice_allocation && !slice_scheduling_policy; }
  friend bool operator==(const ControlDirective&, const ControlDirective&) = default;
};

inline constexpr UeId kIdleRbg = -1;

// RBG index -> UE id (kIdleRbg when unassigned) for one TTI.
struct AllocationMap {
  std::vector<UeId> owner;

  explicit AllocationMap(int rbg_count = 0) : owner(rbg_count, kIdleRbg) {}
  int granted_to(UeId ue) const;
  friend bool operator==(const AllocationMap&, const AllocationMap&) = default;
};

}  // namespace orgym::ran
