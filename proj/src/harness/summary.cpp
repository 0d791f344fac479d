// SPDX-License-Identifier: Apache-2.0
#include "orgym/harness/summary.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "orgym/common/error.hpp"

namespace orgym::harness {
namespace fs = std::filesystem;
using nlohmann::json;

Cdf empirical_cdf(std::vector<double> samples, int points) {
  Cdf out;
  if (samples.empty() || points <= 0) return out;
  std::sort(samples.begin(), samples.end());
  const auto n = samples.size();
  for (int k = 1; k <= points; ++k) {
    const double p = static_cast<double>(k) / points;
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    out.emplace_back(samples[rank - 1], p);
  }
  return out;
}

RunSummary summarize_records(const std::vector<ran::KpmRecord>& records, std::int64_t minute_ms) {
  // station -> window ts -> slice -> (thr, rbg share, buffer)
  struct Acc {
    double thr = 0.0;
    double rbg = 0.0;
    double buf = 0.0;
  };
  std::map<std::string, std::map<std::int64_t, std::map<ran::SliceId, Acc>>> windows;
  for (const auto& r : records) {
    auto& a = windows[r.bs_id][r.ts_ms][r.slice_id];
    a.thr += r.dl_thr_mbps;
    a.rbg += r.rbg_share;
    a.buf += static_cast<double>(r.dl_buffer_bytes);
  }

  RunSummary summary;
  for (const auto& [bs, by_ts] : windows) {
    StationSummary st;
    st.bs_id = bs;
    std::set<ran::SliceId> slices;
    for (const auto& [ts, by_slice] : by_ts) {
      for (const auto& [s, a] : by_slice) slices.insert(s);
    }
    std::map<int, std::map<ran::SliceId, Acc>> minute_sums;
    std::map<int, int> minute_windows;
    std::map<ran::SliceId, std::vector<double>> buffers;
    for (const auto& [ts, by_slice] : by_ts) {
      const int m = static_cast<int>((ts - 1) / minute_ms);
      ++minute_windows[m];
      for (ran::SliceId s : slices) {
        const auto it = by_slice.find(s);
        const Acc a = it == by_slice.end() ? Acc{} : it->second;
        auto& sum = minute_sums[m][s];
        sum.thr += a.thr;
        sum.rbg += a.rbg;
        sum.buf += a.buf;
        buffers[s].push_back(a.buf);
      }
    }
    for (const auto& [m, by_slice] : minute_sums) {
      MinuteSummary ms;
      ms.minute = m;
      ms.start_ms = m * minute_ms;
      ms.end_ms = (m + 1) * minute_ms;
      ms.windows = minute_windows[m];
      double thr_total = 0.0;
      double rbg_total = 0.0;
      for (const auto& [s, a] : by_slice) {
        thr_total += a.thr;
        rbg_total += a.rbg;
      }
      for (const auto& [s, a] : by_slice) {
        SliceMinute sm;
        sm.thr_mbps = a.thr / ms.windows;
        sm.buffer_bytes = a.buf / ms.windows;
        sm.thr_share = thr_total > 0.0 ? a.thr / thr_total : 0.0;
        sm.rbg_share = rbg_total > 0.0 ? a.rbg / rbg_total : 0.0;
        ms.residual = std::max(ms.residual, std::abs(sm.thr_share - sm.rbg_share));
        ms.slices[s] = sm;
      }
      st.max_residual = std::max(st.max_residual, ms.residual);
      st.minutes.push_back(std::move(ms));
    }
    for (auto& [s, b] : buffers) st.buffer_cdf[s] = empirical_cdf(std::move(b));
    summary.stations.push_back(std::move(st));
  }
  return summary;
}

std::vector<double> control_latencies(const std::string& path) {
  std::vector<double> out;
  std::ifstream in(path);
  if (!in) return out;
  std::map<std::uint32_t, std::int64_t> sent;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      continue;
    }
    const auto event = j.value("event", "");
    if (!j.contains("transaction_id")) continue;
    const auto tid = j["transaction_id"].get<std::uint32_t>();
    if (event == "control") {
      sent[tid] = j.value("ts_ms", std::int64_t{0});
    } else if (event == "control_ack") {
      if (auto it = sent.find(tid); it != sent.end()) {
        out.push_back(static_cast<double>(j.value("ts_ms", std::int64_t{0}) - it->second));
        sent.erase(it);
      }
    }
  }
  return out;
}

json summary_to_json(const RunSummary& summary) {
  json stations = json::array();
  for (const auto& st : summary.stations) {
    json minutes = json::array();
    for (const auto& m : st.minutes) {
      json slices = json::object();
      for (const auto& [s, sm] : m.slices) {
        slices[std::to_string(s)] = {{"thr_mbps", sm.thr_mbps},
                                     {"thr_share", sm.thr_share},
                                     {"rbg_share", sm.rbg_share},
                                     {"buffer_bytes", sm.buffer_bytes}};
      }
      minutes.push_back({{"minute", m.minute},
                         {"start_ms", m.start_ms},
                         {"end_ms", m.end_ms},
                         {"windows", m.windows},
                         {"residual", m.residual},
                         {"slices", slices}});
    }
    json cdf = json::object();
    for (const auto& [s, points] : st.buffer_cdf) {
      json arr = json::array();
      for (const auto& [v, p] : points) arr.push_back({v, p});
      cdf[std::to_string(s)] = arr;
    }
    stations.push_back(
        {{"bs_id", st.bs_id}, {"max_residual", st.max_residual}, {"minutes", minutes}, {"buffer_cdf", cdf}});
  }
  return {{"stations", stations}, {"control_latency_ms", summary.control_latency_ms}};
}

RunSummary export_summary(const std::string& run_dir) {
  const fs::path dir(run_dir);
  if (!fs::is_directory(dir / "kpm")) throw Error(ErrorCode::kIo, run_dir, "no kpm/ directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir / "kpm")) {
    if (entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ran::KpmRecord> records;
  for (const auto& f : files) {
    auto part = ran::read_kpm_csv_file(f.string());
    records.insert(records.end(), part.begin(), part.end());
  }
  RunSummary summary = summarize_records(records);
  summary.control_latency_ms = control_latencies((dir / "ric.log.jsonl").string());
  std::ofstream out(dir / "summary.json");
  if (!out) throw Error(ErrorCode::kIo, (dir / "summary.json").string(), "cannot write");
  out << summary_to_json(summary).dump(2) << '\n';
  return summary;
}

}  // namespace orgym::harness
