// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orgym/ran/kpm.hpp"

namespace orgym::xapp {

// Per slice, in ascending slice id: mean throughput (Mbps), mean buffer
// (bytes), mean TX TBs, each taken over the last W windows.
using FeatureVector = std::vector<double>;

inline constexpr int kDefaultWindowCount = 4;

// Slice totals for one KPM window.
struct SliceWindow {
  double thr_mbps = 0.0;
  double buffer_bytes = 0.0;
  double tx_tbs = 0.0;
  friend bool operator==(const SliceWindow&, const SliceWindow&) = default;
};

// Bounded history of KPM windows (keyed by window end) aggregated per slice.
class WindowStore {
 public:
  // Only records from bs_id are kept when it is non-empty.
  explicit WindowStore(std::size_t capacity = 64, std::string bs_id = {});

  void add(std::span<const ran::KpmRecord> records);
  void add(const ran::KpmRecord& record) { add(std::span<const ran::KpmRecord>(&record, 1)); }

  std::size_t window_count() const { return windows_.size(); }
  std::vector<ran::SliceId> slices_seen() const;
  // Oldest first; slices absent from a window read as zeros.
  std::vector<std::map<ran::SliceId, SliceWindow>> last(std::size_t n) const;
  std::optional<std::int64_t> latest_ts() const;
  void clear() { windows_.clear(); }

 private:
  std::size_t capacity_;
  std::string bs_id_;
  std::map<std::int64_t, std::map<ran::SliceId, SliceWindow>> windows_;
};

// Throws Error(kInsufficientHistory) with fewer than w windows stored.
// An empty slice list means every slice seen, ascending.
FeatureVector window_features(const WindowStore& store, int w, const std::vector<ran::SliceId>& slices = {});

// The data-processing stage of an xApp.
class FeatureProcessor {
 public:
  virtual ~FeatureProcessor() = default;
  virtual FeatureVector process(const WindowStore& store) = 0;
};

class WindowFeatureProcessor : public FeatureProcessor {
 public:
  WindowFeatureProcessor(int window_count, std::vector<ran::SliceId> slices)
      : w_(window_count), slices_(std::move(slices)) {}
  FeatureVector process(const WindowStore& store) override { return window_features(store, w_, slices_); }

 private:
  int w_;
  std::vector<ran::SliceId> slices_;
};

}  // namespace orgym::xapp
