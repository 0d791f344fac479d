// SPDX-License-Identifier: Apache-2.0
#include "orgym/xapp/features.hpp"

#include <set>

#include "orgym/common/error.hpp"

namespace orgym::xapp {

WindowStore::WindowStore(std::size_t capacity, std::string bs_id) : capacity_(capacity), bs_id_(std::move(bs_id)) {}

void WindowStore::add(std::span<const ran::KpmRecord> records) {
  for (const auto& r : records) {
    if (!bs_id_.empty() && r.bs_id != bs_id_) continue;
    SliceWindow& w = windows_[r.ts_ms][r.slice_id];
    w.thr_mbps += r.dl_thr_mbps;
    w.buffer_bytes += static_cast<double>(r.dl_buffer_bytes);
    w.tx_tbs += static_cast<double>(r.dl_tx_tbs);
  }
  while (windows_.size() > capacity_) windows_.erase(windows_.begin());
}

std::vector<ran::SliceId> WindowStore::slices_seen() const {
  std::set<ran::SliceId> ids;
  for (const auto& [ts, slices] : windows_) {
    for (const auto& [id, w] : slices) ids.insert(id);
  }
  return {ids.begin(), ids.end()};
}

std::vector<std::map<ran::SliceId, SliceWindow>> WindowStore::last(std::size_t n) const {
  std::vector<std::map<ran::SliceId, SliceWindow>> out;
  auto it = windows_.end();
  for (std::size_t i = 0; i < n && it != windows_.begin(); ++i) {
    --it;
    out.insert(out.begin(), it->second);
  }
  return out;
}

std::optional<std::int64_t> WindowStore::latest_ts() const {
  if (windows_.empty()) return std::nullopt;
  return windows_.rbegin()->first;
}

FeatureVector window_features(const WindowStore& store, int w, const std::vector<ran::SliceId>& slices) {
  if (w <= 0) throw Error(ErrorCode::kInvalidValue, "window_count", "must be positive");
  if (store.window_count() < static_cast<std::size_t>(w)) {
    throw Error(ErrorCode::kInsufficientHistory, "window_count",
                std::to_string(store.window_count()) + " of " + std::to_string(w) + " windows available");
  }
  const auto ids = slices.empty() ? store.slices_seen() : slices;
  const auto windows = store.last(static_cast<std::size_t>(w));
  FeatureVector out;
  out.reserve(ids.size() * 3);
  for (ran::SliceId id : ids) {
    SliceWindow sum;
    for (const auto& win : windows) {
      auto it = win.find(id);
      if (it == win.end()) continue;
      sum.thr_mbps += it->second.thr_mbps;
      sum.buffer_bytes += it->second.buffer_bytes;
      sum.tx_tbs += it->second.tx_tbs;
    }
    out.push_back(sum.thr_mbps / w);
    out.push_back(sum.buffer_bytes / w);
    out.push_back(sum.tx_tbs / w);
  }
  return out;
}

}  // namespace orgym::xapp
