// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orgym/agent/ppo.hpp"
#include "orgym/common/error.hpp"
#include "orgym/e2/messages.hpp"
#include "orgym/harness/replay.hpp"
#include "orgym/harness/runner.hpp"

using namespace orgym;
using namespace orgym::harness;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kIo;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("orgym_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int rbgs(const ran::RbgRange& r) { return r.size(); }

// One station, two saturated slices split 9/8, no timeline.
ExperimentPlan quiet_plan(std::int64_t duration_ms) {
  auto plan = build_stairs_plan();
  plan.name = "quiet";
  plan.timeline.clear();
  plan.duration_ms = duration_ms;
  return plan;
}

std::string kpm_file(const ExperimentPlan& plan) { return plan.stations[0].bs_id + ".csv"; }

}  // namespace

TEST_CASE("percent allocation rounds ties up for the first slice") {
  auto a = percent_allocation({{0, 75}, {1, 25}}, 17);
  CHECK(rbgs(a[0]) == 13);  // 12.75
  CHECK(rbgs(a[1]) == 4);
  a = percent_allocation({{0, 50}, {1, 50}}, 17);
  CHECK(rbgs(a[0]) == 9);  // 8.5 rounds up for A
  CHECK(rbgs(a[1]) == 8);
  a = percent_allocation({{0, 25}, {1, 75}}, 17);
  CHECK(rbgs(a[0]) == 4);  // 4.25
  CHECK(rbgs(a[1]) == 13);
  CHECK(a[0] == ran::RbgRange{0, 3});
  CHECK(a[1] == ran::RbgRange{4, 16});
  CHECK(code_of([] { percent_allocation({{0, 50}, {1, 40}}, 17); }) == ErrorCode::kInvalidValue);
  CHECK(code_of([] { percent_allocation({{0, 1}, {1, 99}}, 17); }) == ErrorCode::kInvalidValue);
}

TEST_CASE("catalog plans") {
  const auto stairs = build_stairs_plan();
  REQUIRE(stairs.timeline.size() == 2);
  CHECK(stairs.duration_ms == 180000);
  CHECK(rbgs(stairs.stations[0].slice_allocation.at(0)) == 13);
  CHECK(stairs.timeline[0].at_ms == 60000);
  CHECK(rbgs(stairs.timeline[0].directive.slice_allocation->at(0)) == 9);
  CHECK(rbgs(stairs.timeline[0].directive.slice_allocation->at(1)) == 8);
  CHECK(stairs.timeline[1].at_ms == 120000);
  CHECK(rbgs(stairs.timeline[1].directive.slice_allocation->at(0)) == 4);
  for (const auto& e : stairs.timeline) {
    int total = 0;
    for (const auto& [s, r] : *e.directive.slice_allocation) total += rbgs(r);
    CHECK(total == 17);
  }
  for (const auto& ue : stairs.stations[0].ues) CHECK(ue.saturated);

  const auto v = build_v_plan();
  CHECK(rbgs(v.timeline[0].directive.slice_allocation->at(0)) == 4);   // 25 %
  CHECK(rbgs(v.timeline[1].directive.slice_allocation->at(0)) == 13);  // 75 %

  const auto prio = build_prioritization_plan();
  REQUIRE(prio.timeline.size() == 1);
  CHECK(prio.timeline[0].kind == EventKind::kStartXapp);
  CHECK(prio.timeline[0].at_ms == 150000);
  CHECK(prio.stations[0].slice_allocation.size() == 3);
  for (const auto& [s, r] : prio.stations[0].slice_allocation) CHECK(rbgs(r) == 5);

  for (const auto& p : {stairs, v, prio}) CHECK_NOTHROW(validate_plan(p));
  CHECK(code_of([] { build_plan("w"); }) == ErrorCode::kInvalidValue);
}

TEST_CASE("plan json round trip") {
  for (const auto& p : {build_stairs_plan(), build_v_plan(), build_prioritization_plan()}) {
    const auto j = plan_to_json(p);
    const auto back = plan_from_json(j);
    CHECK(plan_to_json(back) == j);
    CHECK(back.stations == p.stations);
    CHECK(!plan_to_json(p, false).contains("output-dir"));
  }
  CHECK(code_of([] { parse_plan("{\"stations\":[]"); }) == ErrorCode::kMalformedJson);
  CHECK(code_of([] { parse_plan("{\"stations\":[]}"); }) == ErrorCode::kMalformedJson);
}

TEST_CASE("timeline conflicts are caught before the run") {
  auto out_of_order = build_stairs_plan();
  std::swap(out_of_order.timeline[0], out_of_order.timeline[1]);
  CHECK(code_of([&] { validate_plan(out_of_order); }) == ErrorCode::kTimelineConflict);

  auto undefined_slice = build_stairs_plan();
  undefined_slice.timeline[0].directive.slice_allocation = std::map<ran::SliceId, ran::RbgRange>{{7, {0, 3}}};
  CHECK(code_of([&] { validate_plan(undefined_slice); }) == ErrorCode::kTimelineConflict);

  auto overlap = build_stairs_plan();
  overlap.timeline[0].directive.slice_allocation = std::map<ran::SliceId, ran::RbgRange>{{0, {0, 9}}, {1, {9, 16}}};
  CHECK(code_of([&] { validate_plan(overlap); }) == ErrorCode::kTimelineConflict);

  auto late = build_stairs_plan();
  late.timeline[1].at_ms = 180000;
  CHECK(code_of([&] { validate_plan(late); }) == ErrorCode::kTimelineConflict);

  auto unknown_station = build_stairs_plan();
  unknown_station.timeline[0].directive.target = "gnb:001-001-00000001";
  CHECK(code_of([&] { validate_plan(unknown_station); }) == ErrorCode::kTimelineConflict);

  auto unknown_xapp = build_prioritization_plan();
  unknown_xapp.timeline[0].xapp_id = "ghost";
  CHECK(code_of([&] { validate_plan(unknown_xapp); }) == ErrorCode::kTimelineConflict);

  auto twice = build_prioritization_plan();
  twice.timeline.push_back(twice.timeline[0]);
  twice.timeline.back().at_ms = 160000;
  CHECK(code_of([&] { validate_plan(twice); }) == ErrorCode::kTimelineConflict);

  auto bad_target = build_prioritization_plan();
  bad_target.xapps[0].target_slice = 5;
  CHECK(code_of([&] { validate_plan(bad_target); }) == ErrorCode::kTimelineConflict);

  // Nothing is written for a rejected plan.
  const auto dir = scratch("conflict");
  RunOptions o;
  o.output_dir = dir.string();
  CHECK(code_of([&] { run_experiment(undefined_slice, o); }) == ErrorCode::kTimelineConflict);
  CHECK(!fs::exists(dir));
}

TEST_CASE("empty timeline: one row per UE per window; runs are byte-identical") {
  const auto plan = quiet_plan(10000);
  const auto a = scratch("quiet_a");
  const auto b = scratch("quiet_b");
  RunOptions oa;
  oa.output_dir = a.string();
  oa.seed = 42;
  RunOptions ob = oa;
  ob.output_dir = b.string();
  const auto ra = run_experiment(plan, oa);
  run_experiment(plan, ob);
  CHECK(ra.simulated_ms == 10000);

  const auto records = ran::read_kpm_csv_file((a / "kpm" / kpm_file(plan)).string());
  const std::size_t windows = (10000 + 99) / 100;
  CHECK(records.size() == windows * plan.stations[0].ues.size());
  std::map<ran::UeId, int> per_ue;
  for (const auto& r : records) ++per_ue[r.ue_id];
  for (const auto& [ue, n] : per_ue) CHECK(n == static_cast<int>(windows));

  for (const auto* f : {"config.json", "ric.log.jsonl", "summary.json"}) {
    INFO(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(slurp(a / "kpm" / kpm_file(plan)) == slurp(b / "kpm" / kpm_file(plan)));
  CHECK(fs::exists(a / "meta.json"));
  CHECK(nlohmann::json::parse(slurp(a / "config.json")).at("stations")[0].at("seed") == 42);
  const auto meta = nlohmann::json::parse(slurp(a / "meta.json"));
  CHECK(meta.at("status") == "ok");
  CHECK(meta.contains("wall_ms"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("summary: single slice, constant series, stairs proportionality") {
  auto single = quiet_plan(120000);
  single.stations[0].network_slicing = false;
  single.stations[0].slice_allocation.clear();
  single.stations[0].slice_scheduling_policy.clear();
  single.stations[0].slice_users = {{0, {1, 2, 3, 4}}};
  const auto dir = scratch("single");
  RunOptions o;
  o.output_dir = dir.string();
  const auto r = run_experiment(single, o);
  REQUIRE(r.summary.stations.size() == 1);
  REQUIRE(r.summary.stations[0].minutes.size() == 2);
  for (const auto& m : r.summary.stations[0].minutes) {
    CHECK(m.windows == 600);
    CHECK(m.slices.at(0).thr_share == 1.0);
    CHECK(m.residual == 0.0);
  }
  CHECK(fs::exists(dir / "summary.json"));
  fs::remove_all(dir);

  const auto cdf = empirical_cdf(std::vector<double>(37, 5.0));
  REQUIRE(cdf.size() == 100);
  for (const auto& [v, p] : cdf) CHECK(v == 5.0);
  CHECK(cdf.front().second == doctest::Approx(0.01));
  CHECK(cdf.back().second == 1.0);
  const auto ramp = empirical_cdf({3, 1, 2, 4});
  CHECK(ramp[24].first == 1.0);
  CHECK(ramp[25].first == 2.0);
  CHECK(ramp[99].first == 4.0);
  for (std::size_t i = 1; i < ramp.size(); ++i) {
    CHECK(ramp[i].first >= ramp[i - 1].first);
    CHECK(ramp[i].second > ramp[i - 1].second);
  }

  const auto sdir = scratch("stairs");
  o.output_dir = sdir.string();
  const auto s = run_experiment(build_stairs_plan(), o);
  const auto& mins = s.summary.stations[0].minutes;
  REQUIRE(mins.size() == 3);
  for (const auto& m : mins) CHECK(m.residual <= 0.10);
  CHECK(mins[0].slices.at(0).thr_mbps > mins[1].slices.at(0).thr_mbps);
  CHECK(mins[1].slices.at(0).thr_mbps > mins[2].slices.at(0).thr_mbps);
  CHECK(mins[0].slices.at(1).thr_mbps < mins[1].slices.at(1).thr_mbps);
  CHECK(mins[1].slices.at(1).thr_mbps < mins[2].slices.at(1).thr_mbps);
  // Round-robin over saturated identical UEs: each RBG carries 1000 bits per
  // TTI, i.e. 1 Mbps, so slice throughput equals its RBG count.
  CHECK(mins[0].slices.at(0).thr_mbps == doctest::Approx(13.0));
  CHECK(mins[1].slices.at(1).thr_mbps == doctest::Approx(8.0));
  const auto j = nlohmann::json::parse(slurp(sdir / "summary.json"));
  CHECK(j.at("stations")[0].at("minutes").size() == 3);
  CHECK(j.at("stations")[0].at("buffer_cdf").at("0").size() == 100);
  fs::remove_all(sdir);
}

TEST_CASE("prioritization: xApp boosts slice 0 after 150 s") {
  const auto dir = scratch("prio");
  RunOptions o;
  o.output_dir = dir.string();
  const auto r = run_experiment(build_prioritization_plan(), o);
  const auto& epochs = r.epochs.at("prioritize");
  REQUIRE(!epochs.empty());
  CHECK(epochs[0].ack_status == "applied");
  CHECK(epochs[0].decided_at_ms >= 150000);
  CHECK(epochs[0].acked_at_ms - epochs[0].decided_at_ms <= 2 * 250);
  for (std::size_t i = 1; i < epochs.size(); ++i) CHECK(epochs[i].ack_status == "noop");
  const auto& mins = r.summary.stations[0].minutes;
  REQUIRE(mins.size() == 5);
  CHECK(mins[4].slices.at(0).thr_mbps > mins[4].slices.at(1).thr_mbps);
  CHECK(mins[4].slices.at(0).thr_mbps >= 1.5 * mins[0].slices.at(0).thr_mbps);
  CHECK(mins[4].slices.at(1).thr_mbps < mins[0].slices.at(1).thr_mbps);
  CHECK(r.summary.control_latency_ms.size() == 1);
  CHECK(fs::exists(dir / "xapp" / "prioritize.csv"));
  fs::remove_all(dir);
}

TEST_CASE("replay reproduces live features; pacing; schema errors") {
  auto plan = build_prioritization_plan();
  plan.duration_ms = 20000;
  plan.timeline[0].at_ms = 5000;
  const auto dir = scratch("replay");
  RunOptions o;
  o.output_dir = dir.string();
  const auto r = run_experiment(plan, o);
  const auto& live = r.epochs.at("prioritize");
  REQUIRE(live.size() >= 10);

  const auto csv = (dir / "kpm" / kpm_file(plan)).string();
  xapp::WindowStore store;
  std::size_t matched = 0;
  const auto windows = replay_dataset({csv}, [&](const std::vector<ran::KpmRecord>& w) {
    store.add(w);
    for (const auto& e : live) {
      if (e.ts_ms == w.front().ts_ms) {
        CHECK(xapp::window_features(store, plan.xapps[0].descriptor.window_count, plan.xapps[0].descriptor.slices) ==
              e.features);
        ++matched;
      }
    }
  });
  CHECK(windows == 200);
  CHECK(matched == live.size());

  // An xApp fed the replay as indications computes the same vectors.
  struct Null : xapp::RicClient {
    void attach(const std::string&, ric::XappSink*) override {}
    void detach() override {}
    void subscribe(const e2::NodeId&, int, const std::vector<std::string>&, std::uint32_t) override {}
    void control(const ran::ControlDirective&, std::uint32_t) override {}
  } null_client;
  ric::ManualClock clock;
  auto desc = plan.xapps[0].descriptor;
  desc.decision_reports = 1;
  xapp::XApp offline(desc, std::make_unique<xapp::WindowFeatureProcessor>(desc.window_count, desc.slices),
                     std::make_unique<xapp::PrioritizeModel>(ran::ControlDirective{}), null_client, clock);
  replay_indications({csv}, offline, 1);
  REQUIRE(offline.epochs().size() == 200 - 3);
  for (const auto& e : live) {
    bool found = false;
    for (const auto& off : offline.epochs()) {
      if (off.ts_ms == e.ts_ms) {
        CHECK(off.features == e.features);
        found = true;
      }
    }
    CHECK(found);
  }

  // 20 s of windows at 100x: (20000 - 100) / 100 = 199 ms of wall time.
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::int64_t> order;
  replay_dataset({csv}, [&](const std::vector<ran::KpmRecord>& w) { order.push_back(w.front().ts_ms); },
                 ReplayOptions{100.0});
  const double wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  CHECK(wall >= 199.0 * 0.8);
  CHECK(wall <= 199.0 * 1.2);
  CHECK(std::is_sorted(order.begin(), order.end()));

  const auto bad = dir / "bad.csv";
  {
    std::ofstream out(bad);
    out << "ts_ms,bs_id,slice_id,ue_id,dl_tx_bytes,dl_tx_tbs,dl_buffer_bytes,dl_thr_mbps,rbg_share\n1,x,0,1,0,0,0,0,0\n";
  }
  CHECK(code_of([&] { replay_dataset({bad.string()}, [](const std::vector<ran::KpmRecord>&) {}); }) ==
        ErrorCode::kSchemaMismatch);
  fs::remove_all(dir);
}

TEST_CASE("sched xApps run end to end with constant and checkpoint policies") {
  auto plan = quiet_plan(6000);
  XappPlan x;
  x.kind = XappKind::kSchedSlicing;
  x.policy = "constant:19";
  x.descriptor.xapp_id = "slicer";
  x.descriptor.targets = {e2::NodeId(plan.stations[0].bs_id)};
  x.descriptor.metric_set = e2::kpm_metric_names();
  x.descriptor.slices = {0, 1};
  plan.xapps.push_back(x);
  TimelineEvent start;
  start.at_ms = 0;
  start.kind = EventKind::kStartXapp;
  start.xapp_id = "slicer";
  plan.timeline.push_back(start);

  const auto dir = scratch("sched");
  RunOptions o;
  o.output_dir = dir.string();
  const auto r = run_experiment(plan, o);
  const auto& epochs = r.epochs.at("slicer");
  REQUIRE(epochs.size() == 6);
  for (const auto& e : epochs) {
    CHECK(e.action_id == 19);
    CHECK(e.ack_status == "applied");
  }
  // Action 19 = partition 2 ([0,5] / [6,16]) with policies (0, 1).
  const auto space = xapp::ActionSpace::joint({0, 1}, 17, plan.stations[0].slice_allocation);
  CHECK(space.decode(19, "").slice_allocation->at(0) == ran::RbgRange{0, 5});
  const auto& last = r.summary.stations[0].minutes.back();
  CHECK(last.slices.at(0).rbg_share < 0.5);

  // A checkpoint with matching dimensions plugs in as a greedy policy.
  agent::PpoAgent net(6, space.size());
  const auto ckpt = (dir / "net.json").string();
  net.save(ckpt);
  plan.xapps[0].policy = "checkpoint:" + ckpt;
  o.output_dir = (dir / "ckpt").string();
  const auto rc = run_experiment(plan, o);
  for (const auto& e : rc.epochs.at("slicer")) CHECK(e.action_id == 0);

  // A missing checkpoint crashes the xApp; outputs so far stay on disk.
  plan.xapps[0].policy = "checkpoint:" + (dir / "missing.json").string();
  o.output_dir = (dir / "crash").string();
  CHECK(code_of([&] { run_experiment(plan, o); }) == ErrorCode::kComponentCrash);
  CHECK(fs::exists(dir / "crash" / "config.json"));
  CHECK(fs::exists(dir / "crash" / "kpm" / kpm_file(plan)));
  const auto meta = nlohmann::json::parse(slurp(dir / "crash" / "meta.json"));
  CHECK(meta.at("status") == "crashed");
  CHECK(meta.at("component") == "slicer");
  fs::remove_all(dir);
}

TEST_CASE("tcp transport runs the prioritization xApp") {
  auto plan = build_prioritization_plan();
  plan.duration_ms = 3000;
  plan.timeline[0].at_ms = 500;
  const auto dir = scratch("tcp");
  RunOptions o;
  o.output_dir = dir.string();
  o.net = true;
  o.net_speed = 4.0;
  const auto r = run_experiment(plan, o);
  const auto records = ran::read_kpm_csv_file((dir / "kpm" / kpm_file(plan)).string());
  CHECK(records.size() == 30 * 6);
  const auto& epochs = r.epochs.at("prioritize");
  REQUIRE(!epochs.empty());
  CHECK(epochs[0].ack_status == "applied");
  CHECK(nlohmann::json::parse(slurp(dir / "meta.json")).at("transport") == "tcp");
  fs::remove_all(dir);
}
