// SPDX-License-Identifier: Apache-2.0
#include "orgym/harness/replay.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "orgym/common/error.hpp"

namespace orgym::harness {

std::size_t replay_dataset(const std::vector<std::string>& csv_paths, const WindowSink& sink,
                           const ReplayOptions& options) {
  std::vector<ran::KpmRecord> records;
  for (const auto& path : csv_paths) {
    auto part = ran::read_kpm_csv_file(path);
    records.insert(records.end(), part.begin(), part.end());
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const ran::KpmRecord& a, const ran::KpmRecord& b) { return a.ts_ms < b.ts_ms; });

  const auto wall_start = std::chrono::steady_clock::now();
  const std::int64_t ts0 = records.empty() ? 0 : records.front().ts_ms;
  std::size_t windows = 0;
  std::size_t i = 0;
  while (i < records.size()) {
    const auto ts = records[i].ts_ms;
    // Every station's window at this timestamp, each delivered on its own.
    std::vector<std::vector<ran::KpmRecord>> groups;
    std::vector<std::string> order;
    for (; i < records.size() && records[i].ts_ms == ts; ++i) {
      auto it = std::find(order.begin(), order.end(), records[i].bs_id);
      if (it == order.end()) {
        order.push_back(records[i].bs_id);
        groups.emplace_back();
        it = order.end() - 1;
      }
      groups[static_cast<std::size_t>(it - order.begin())].push_back(records[i]);
    }
    if (options.speed > 0.0) {
      const auto due = wall_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                        std::chrono::duration<double, std::milli>((ts - ts0) / options.speed));
      std::this_thread::sleep_until(due);
    }
    for (const auto& g : groups) {
      sink(g);
      ++windows;
    }
  }
  return windows;
}

std::size_t replay_indications(const std::vector<std::string>& csv_paths, ric::XappSink& sink,
                               int windows_per_indication, const ReplayOptions& options) {
  if (windows_per_indication <= 0) {
    throw Error(ErrorCode::kInvalidValue, "windows_per_indication", "must be positive");
  }
  std::uint64_t seq = 0;
  e2::RicIndication pending;
  int in_pending = 0;
  auto flush = [&] {
    if (in_pending == 0) return;
    pending.seq = seq++;
    sink.on_indication(pending);
    pending = e2::RicIndication{};
    in_pending = 0;
  };
  replay_dataset(
      csv_paths,
      [&](const std::vector<ran::KpmRecord>& window) {
        pending.node_id = e2::NodeId::parse(window.front().bs_id).value_or(e2::NodeId{});
        pending.ts_ms = window.front().ts_ms;
        pending.records.insert(pending.records.end(), window.begin(), window.end());
        if (++in_pending == windows_per_indication) flush();
      },
      options);
  flush();
  return seq;
}

}  // namespace orgym::harness
