// SPDX-License-Identifier: Apache-2.0
// Per-minute slice statistics, buffer CDFs and proportionality residuals.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orgym/ran/kpm.hpp"

namespace orgym::harness {

inline constexpr std::int64_t kMinuteMs = 60000;
inline constexpr int kCdfPoints = 100;

struct SliceMinute {
  double thr_mbps = 0.0;       // mean over windows of the slice total
  double thr_share = 0.0;      // of the cell's throughput in the minute
  double rbg_share = 0.0;      // of the RBGs granted in the minute
  double buffer_bytes = 0.0;   // mean over windows of the slice total
};

struct MinuteSummary {
  int minute = 0;
  std::int64_t start_ms = 0;  // windows ending in (start_ms, end_ms]
  std::int64_t end_ms = 0;
  int windows = 0;
  std::map<ran::SliceId, SliceMinute> slices;
  double residual = 0.0;  // max over slices of |thr_share - rbg_share|
};

using Cdf = std::vector<std::pair<double, double>>;  // (value, probability)

struct StationSummary {
  std::string bs_id;
  std::vector<MinuteSummary> minutes;
  std::map<ran::SliceId, Cdf> buffer_cdf;
  double max_residual = 0.0;
};

struct RunSummary {
  std::vector<StationSummary> stations;       // ascending bs_id
  std::vector<double> control_latency_ms;     // control -> ack, RIC clock
};

// Empirical CDF at kCdfPoints evenly spaced probabilities (nearest rank).
Cdf empirical_cdf(std::vector<double> samples, int points = kCdfPoints);

// Records may span several stations; minutes of `minute_ms`.
RunSummary summarize_records(const std::vector<ran::KpmRecord>& records, std::int64_t minute_ms = kMinuteMs);

// Control latencies from a RIC JSONL log, pairing control and control_ack
// lines by transaction id.
std::vector<double> control_latencies(const std::string& ric_log_path);

nlohmann::json summary_to_json(const RunSummary& summary);

// Reads kpm/*.csv and ric.log.jsonl under run_dir, writes summary.json and
// returns the summary. Throws Error(kIo) when kpm/ is missing.
RunSummary export_summary(const std::string& run_dir);

}  // namespace orgym::harness
