// SPDX-License-Identifier: Apache-2.0
#include "orgym/ran/kpm.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "orgym/common/error.hpp"

namespace orgym::ran {

double quantize_micro(double value) { return std::round(value * 1e6) / 1e6; }

double throughput_mbps(std::int64_t tx_bytes, std::int64_t window_ms) {
  // bits / microseconds == Mbit/s
  return quantize_micro(static_cast<double>(tx_bytes) * 8.0 / (static_cast<double>(window_ms) * 1000.0));
}

std::string format_kpm_row(const KpmRecord& r) {
  char tail[192];
  std::snprintf(tail, sizeof(tail), ",%d,%d,%lld,%lld,%lld,%.6f,%.6f,%d", r.slice_id, r.ue_id,
                static_cast<long long>(r.dl_tx_bytes), static_cast<long long>(r.dl_tx_tbs),
                static_cast<long long>(r.dl_buffer_bytes), r.dl_thr_mbps, r.rbg_share, r.sched_policy);
  return std::to_string(r.ts_ms) + "," + r.bs_id + tail;
}

KpmCsvWriter::KpmCsvWriter(std::ostream& out) : out_(out) { out_ << kKpmCsvHeader << '\n'; }

void KpmCsvWriter::write(const KpmRecord& record) { out_ << format_kpm_row(record) << '\n'; }

void KpmCsvWriter::write(const std::vector<KpmRecord>& records) {
  for (const auto& r : records) write(r);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
  if (text.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    // strtod: std::from_chars for doubles is missing from older libstdc++
    std::string copy(text);
    char* end = nullptr;
    value = std::strtod(copy.c_str(), &end);
    return end == copy.c_str() + copy.size();
  } else {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc{} && ptr == text.data() + text.size();
  }
}

}  // namespace

std::vector<KpmRecord> read_kpm_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kKpmCsvHeader) {
    throw Error(ErrorCode::kSchemaMismatch, "header", "expected '" + std::string(kKpmCsvHeader) + "'");
  }
  std::vector<KpmRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = split(line);
    KpmRecord r;
    bool ok = cols.size() == 10;
    if (ok) {
      r.bs_id = std::string(cols[1]);
      ok = parse_number(cols[0], r.ts_ms) && parse_number(cols[2], r.slice_id) && parse_number(cols[3], r.ue_id) &&
           parse_number(cols[4], r.dl_tx_bytes) && parse_number(cols[5], r.dl_tx_tbs) &&
           parse_number(cols[6], r.dl_buffer_bytes) && parse_number(cols[7], r.dl_thr_mbps) &&
           parse_number(cols[8], r.rbg_share) && parse_number(cols[9], r.sched_policy);
    }
    if (!ok) throw Error(ErrorCode::kInvalidValue, "line " + std::to_string(line_no), "malformed KPM row");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<KpmRecord> read_kpm_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, path, "cannot open");
  return read_kpm_csv(in);
}

}  // namespace orgym::ran
