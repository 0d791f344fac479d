// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "orgym/ran/types.hpp"

namespace orgym::ran {

// One reporting-window row of per-UE downlink metrics.
struct KpmRecord {
  std::int64_t ts_ms = 0;  // window end
  std::string bs_id;
  SliceId slice_id = 0;
  UeId ue_id = 0;
  std::int64_t dl_tx_bytes = 0;
  std::int64_t dl_tx_tbs = 0;
  std::int64_t dl_buffer_bytes = 0;
  double dl_thr_mbps = 0.0;
  double rbg_share = 0.0;
  int sched_policy = 0;

  friend bool operator==(const KpmRecord&, const KpmRecord&) = default;
};

inline constexpr std::string_view kKpmCsvHeader =
    "ts_ms,bs_id,slice_id,ue_id,dl_tx_bytes,dl_tx_tbs,dl_buffer_bytes,dl_thr_mbps,rbg_share,"
    "sched_policy";

// Rounds to 6 decimals so that the in-memory value is exactly the double a
// CSV reader recovers from the "%.6f" text.
double quantize_micro(double value);

// dl_tx_bytes * 8 / window_us, quantized.
double throughput_mbps(std::int64_t tx_bytes, std::int64_t window_ms);

std::string format_kpm_row(const KpmRecord& record);

class KpmCsvWriter {
 public:
  explicit KpmCsvWriter(std::ostream& out);
  void write(const KpmRecord& record);
  void write(const std::vector<KpmRecord>& records);

 private:
  std::ostream& out_;
};

// Throws orgym::Error: kSchemaMismatch when the header differs from
// kKpmCsvHeader, kInvalidValue (key = "line N") on a malformed row.
std::vector<KpmRecord> read_kpm_csv(std::istream& in);
std::vector<KpmRecord> read_kpm_csv_file(const std::string& path);

}  // namespace orgym::ran
