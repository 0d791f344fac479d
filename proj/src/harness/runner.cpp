// SPDX-License-Identifier: Apache-2.0
#include "orgym/harness/runner.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "orgym/agent/ppo.hpp"
#include "orgym/common/error.hpp"
#include "orgym/common/log.hpp"
#include "orgym/e2/base_station.hpp"
#include "orgym/e2/tcp.hpp"
#include "orgym/ric/sim_bed.hpp"
#include "orgym/ric/tcp_server.hpp"
#include "orgym/xapp/client.hpp"

namespace orgym::harness {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<ran::SliceId> slice_ids(const ran::ScenarioConfig& cfg) {
  std::vector<ran::SliceId> ids;
  for (const auto& s : cfg.slice_table().slices) ids.push_back(s.id);
  return ids;
}

std::unique_ptr<xapp::ActionPolicy> make_policy(const std::string& policy_text, const xapp::ActionSpace& space,
                                                int feature_dim) {
  if (policy_text == "noop") return std::make_unique<xapp::ConstantPolicy>(std::nullopt);
  if (policy_text.rfind("constant:", 0) == 0) {
    int id = 0;
    try {
      id = std::stoi(policy_text.substr(9));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidValue, "policy", "bad constant action in '" + policy_text + "'");
    }
    if (id < 0 || id >= space.size()) {
      throw Error(ErrorCode::kInvalidValue, "policy", "action " + std::to_string(id) + " outside the space");
    }
    return std::make_unique<xapp::ConstantPolicy>(id);
  }
  if (policy_text.rfind("checkpoint:", 0) == 0) {
    auto net = agent::PpoAgent::load(policy_text.substr(11));
    if (net.action_count() != space.size() || net.feature_dim() != feature_dim) {
      throw Error(ErrorCode::kInvalidValue, "policy", "checkpoint dimensions do not match the xApp");
    }
    return std::make_unique<agent::NetPolicy>(std::move(net), agent::ActMode::kGreedy);
  }
  throw Error(ErrorCode::kInvalidValue, "policy", "unknown policy '" + policy_text + "'");
}

// Serializes xApp callbacks from transport threads with the harness loop.
class LockedClient : public xapp::RicClient {
 public:
  LockedClient(std::unique_ptr<xapp::RicClient> inner, std::mutex& mu) : inner_(std::move(inner)), proxy_(mu) {}
  void attach(const std::string& id, ric::XappSink* sink) override {
    proxy_.target = sink;
    inner_->attach(id, &proxy_);
  }
  void detach() override { inner_->detach(); }
  void subscribe(const e2::NodeId& node, int period, const std::vector<std::string>& metrics,
                 std::uint32_t tag) override {
    inner_->subscribe(node, period, metrics, tag);
  }
  void control(const ran::ControlDirective& d, std::uint32_t tag) override { inner_->control(d, tag); }

 private:
  struct Proxy : ric::XappSink {
    explicit Proxy(std::mutex& m) : mu(m) {}
    void on_indication(const e2::RicIndication& i) override {
      std::lock_guard<std::mutex> lock(mu);
      target->on_indication(i);
    }
    void on_subscription_response(std::uint32_t tag, const e2::RicSubscriptionResponse& r) override {
      std::lock_guard<std::mutex> lock(mu);
      target->on_subscription_response(tag, r);
    }
    void on_control_ack(std::uint32_t tag, const e2::RicControlAck& a) override {
      std::lock_guard<std::mutex> lock(mu);
      target->on_control_ack(tag, a);
    }
    std::mutex& mu;
    ric::XappSink* target = nullptr;
  };
  std::unique_ptr<xapp::RicClient> inner_;
  Proxy proxy_;
};

struct LiveXapp {
  std::string id;
  std::unique_ptr<std::ofstream> log;
  std::unique_ptr<xapp::RicClient> client;
  std::unique_ptr<xapp::XApp> app;
};

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Both transports behind one stepping interface.
class Deployment {
 public:
  virtual ~Deployment() = default;
  virtual std::int64_t now_ms() const = 0;
  virtual const ric::Clock& clock() const = 0;
  virtual void apply(const ran::ControlDirective& d) = 0;
  virtual std::unique_ptr<xapp::RicClient> client() = 0;
  virtual void step() = 0;         // one TTI for every station
  virtual void settle() = 0;       // deliver in-flight work
  virtual std::mutex* xapp_mutex() { return nullptr; }
};

class LoopbackDeployment : public Deployment {
 public:
  LoopbackDeployment(const ExperimentPlan& plan, ric::RicOptions opts, const std::vector<ran::KpmCsvWriter*>& csv)
      : bed_(opts) {
    for (std::size_t i = 0; i < plan.stations.size(); ++i) {
      auto& st = bed_.add_station(plan.stations[i]);
      st.set_kpm_listener([w = csv[i]](const std::vector<ran::KpmRecord>& r) { w->write(r); });
    }
    bed_.pump();
  }
  std::int64_t now_ms() const override { return const_cast<ric::SimBed&>(bed_).now_ms(); }
  const ric::Clock& clock() const override { return const_cast<ric::SimBed&>(bed_).clock(); }
  void apply(const ran::ControlDirective& d) override {
    for (auto& st : bed_.stations()) {
      if (d.target.empty() || st->node_id().str() == d.target) {
        const auto out = st->cell().apply_control(d);
        if (!out.applied && out.issue) throw out.issue->to_error();
        return;
      }
    }
  }
  std::unique_ptr<xapp::RicClient> client() override { return std::make_unique<xapp::InProcessRicClient>(bed_.ric()); }
  void step() override { bed_.step_tti(); }
  void settle() override { bed_.pump(); }

 private:
  ric::SimBed bed_;
};

class TcpDeployment : public Deployment {
 public:
  TcpDeployment(const ExperimentPlan& plan, ric::RicOptions opts, const std::vector<ran::KpmCsvWriter*>& csv,
                double speed)
      : ric_(clock_, std::move(opts)), server_(ric_, 0), speed_(speed > 0.0 ? speed : 1.0) {
    tti_ms_ = plan.stations[0].tti_ms;
    for (std::size_t i = 0; i < plan.stations.size(); ++i) {
      auto node = std::make_unique<Node>(plan.stations[i]);
      node->bs.set_kpm_listener([w = csv[i]](const std::vector<ran::KpmRecord>& r) { w->write(r); });
      node->conn = e2::tcp_connect("127.0.0.1", server_.port());
      Node* raw = node.get();
      node->conn->start(
          [raw](std::span<const std::uint8_t> b) {
            std::lock_guard<std::mutex> lock(raw->mu);
            raw->bs.on_bytes(b);
          },
          nullptr);
      {
        std::lock_guard<std::mutex> lock(raw->mu);
        raw->bs.connect(raw->conn);
      }
      nodes_.push_back(std::move(node));
    }
    wait_for_nodes(plan.stations.size());
    wall_start_ = std::chrono::steady_clock::now();
  }
  ~TcpDeployment() override {
    for (auto& n : nodes_) n->conn->close();
    server_.stop();
  }
  std::int64_t now_ms() const override { return clock_.now_ms(); }
  const ric::Clock& clock() const override { return clock_; }
  void apply(const ran::ControlDirective& d) override {
    for (auto& n : nodes_) {
      std::lock_guard<std::mutex> lock(n->mu);
      if (d.target.empty() || n->bs.node_id().str() == d.target) {
        const auto out = n->bs.cell().apply_control(d);
        if (!out.applied && out.issue) throw out.issue->to_error();
        return;
      }
    }
  }
  std::unique_ptr<xapp::RicClient> client() override {
    return std::make_unique<LockedClient>(std::make_unique<xapp::TcpRicClient>("127.0.0.1", server_.port()),
                                          xapp_mu_);
  }
  void step() override {
    clock_.advance(tti_ms_);
    for (auto& n : nodes_) {
      std::lock_guard<std::mutex> lock(n->mu);
      n->bs.step();
    }
    ric_.poll();
    const auto due = wall_start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                       std::chrono::duration<double, std::milli>(clock_.now_ms() / speed_));
    std::this_thread::sleep_until(due);
  }
  void settle() override { std::this_thread::sleep_for(std::chrono::milliseconds(20)); }
  std::mutex* xapp_mutex() override { return &xapp_mu_; }

 private:
  struct Node {
    explicit Node(ran::ScenarioConfig cfg) : bs(std::move(cfg)) {}
    std::mutex mu;
    e2::BaseStation bs;
    std::shared_ptr<e2::TcpConnection> conn;
  };
  void wait_for_nodes(std::size_t n) {
    for (int i = 0; i < 500 && ric_.list_nodes().size() < n; ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (ric_.list_nodes().size() < n) throw Error(ErrorCode::kComponentCrash, "e2", "stations did not register");
  }

  ric::ManualClock clock_;
  ric::Ric ric_;
  ric::RicTcpServer server_;
  double speed_;
  int tti_ms_ = 1;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::mutex xapp_mu_;
  std::chrono::steady_clock::time_point wall_start_;
};

void write_meta(const fs::path& dir, const json& meta) {
  std::ofstream out(dir / "meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace

std::unique_ptr<xapp::DecisionModel> make_model(const XappPlan& plan, const ran::ScenarioConfig& station) {
  const auto ids = slice_ids(station);
  const auto& target = station.bs_id;
  switch (plan.kind) {
    case XappKind::kPrioritize:
      return std::make_unique<xapp::PrioritizeModel>(
          xapp::prioritize_directive(ids, station.rbg_count, plan.target_slice, plan.boost_share, target));
    case XappKind::kSched:
    case XappKind::kSchedSlicing: {
      auto space = plan.kind == XappKind::kSched
                       ? xapp::ActionSpace::sched_only(ids)
                       : xapp::ActionSpace::joint(ids, station.rbg_count, station.slice_allocation);
      const auto feature_slices = plan.descriptor.slices.empty() ? ids : plan.descriptor.slices;
      auto policy = make_policy(plan.policy, space, static_cast<int>(3 * feature_slices.size()));
      return std::make_unique<xapp::SpaceModel>(std::move(space), std::move(policy), target);
    }
  }
  throw Error(ErrorCode::kInvalidValue, "kind", "unknown xApp kind");
}

RunResult run_experiment(const ExperimentPlan& input, const RunOptions& options) {
  ExperimentPlan plan = input;
  if (!options.output_dir.empty()) plan.output_dir = options.output_dir;
  if (options.seed) {
    for (std::size_t i = 0; i < plan.stations.size(); ++i) plan.stations[i].seed = *options.seed + i;
  }
  validate_plan(plan);
  if (plan.output_dir.empty()) throw Error(ErrorCode::kInvalidValue, "output-dir", "no output directory");

  const fs::path dir(plan.output_dir);
  fs::create_directories(dir / "kpm");
  fs::create_directories(dir / "xapp");
  for (const auto* stale : {"summary.json", "meta.json", "ric.log.jsonl"}) fs::remove(dir / stale);
  for (const auto* sub : {"kpm", "xapp"}) {
    for (const auto& entry : fs::directory_iterator(dir / sub)) {
      if (entry.path().extension() == ".csv") fs::remove(entry.path());
    }
  }
  {
    std::ofstream cfg(dir / "config.json");
    cfg << plan_to_json(plan, false).dump(2) << '\n';
  }

  const auto wall_start = std::chrono::steady_clock::now();
  json meta{{"started_at", utc_now()},
            {"output_dir", plan.output_dir},
            {"transport", options.net ? "tcp" : "loopback"},
            {"plan", plan.name}};

  std::ofstream ric_log(dir / "ric.log.jsonl");
  std::vector<std::unique_ptr<std::ofstream>> csv_files;
  std::vector<std::unique_ptr<ran::KpmCsvWriter>> writers;
  std::vector<ran::KpmCsvWriter*> writer_ptrs;
  for (const auto& st : plan.stations) {
    csv_files.push_back(std::make_unique<std::ofstream>(dir / "kpm" / (st.bs_id + ".csv")));
    writers.push_back(std::make_unique<ran::KpmCsvWriter>(*csv_files.back()));
    writer_ptrs.push_back(writers.back().get());
  }

  RunResult result;
  result.dir = plan.output_dir;
  std::vector<LiveXapp> live;
  std::string component = "harness";
  try {
    ric::RicOptions ropts;
    ropts.log = &ric_log;
    component = options.net ? "tcp" : "loopback";
    std::unique_ptr<Deployment> dep;
    if (options.net) {
      dep = std::make_unique<TcpDeployment>(plan, ropts, writer_ptrs, options.net_speed);
    } else {
      dep = std::make_unique<LoopbackDeployment>(plan, ropts, writer_ptrs);
    }

    const int tti_ms = plan.stations[0].tti_ms;
    const std::int64_t ttis = plan.duration_ms / tti_ms;
    std::size_t next_event = 0;
    for (std::int64_t t = 0; t < ttis; ++t) {
      while (next_event < plan.timeline.size() && plan.timeline[next_event].at_ms <= dep->now_ms()) {
        const auto& e = plan.timeline[next_event++];
        if (e.kind == EventKind::kApplyAllocation) {
          component = "station";
          dep->apply(e.directive);
          log::info("t=" + std::to_string(e.at_ms) + " ms: allocation applied");
          continue;
        }
        component = e.xapp_id;
        const XappPlan* xp = nullptr;
        for (const auto& x : plan.xapps) {
          if (x.descriptor.xapp_id == e.xapp_id) xp = &x;
        }
        const ran::ScenarioConfig* station = &plan.stations[0];
        for (const auto& s : plan.stations) {
          if (s.bs_id == xp->descriptor.targets[0].str()) station = &s;
        }
        LiveXapp lx;
        lx.id = e.xapp_id;
        lx.log = std::make_unique<std::ofstream>(dir / "xapp" / (e.xapp_id + ".csv"));
        lx.client = dep->client();
        lx.app = std::make_unique<xapp::XApp>(
            xp->descriptor,
            std::make_unique<xapp::WindowFeatureProcessor>(xp->descriptor.window_count, xp->descriptor.slices),
            make_model(*xp, *station), *lx.client, dep->clock());
        lx.app->set_decision_log(lx.log.get());
        {
          std::unique_lock<std::mutex> lock;
          if (auto* mu = dep->xapp_mutex()) lock = std::unique_lock<std::mutex>(*mu);
          lx.app->start();
        }
        live.push_back(std::move(lx));
        dep->settle();
        log::info("t=" + std::to_string(e.at_ms) + " ms: xApp " + e.xapp_id + " started");
      }
      component = "station";
      dep->step();
      if (!live.empty()) {
        std::unique_lock<std::mutex> lock;
        if (auto* mu = dep->xapp_mutex()) lock = std::unique_lock<std::mutex>(*mu);
        for (auto& lx : live) {
          component = lx.id;
          lx.app->poll();
          if (lx.app->failed()) throw Error(ErrorCode::kComponentCrash, lx.id, lx.app->diagnostic());
        }
        if (!dep->xapp_mutex()) dep->settle();
      }
    }
    result.simulated_ms = dep->now_ms();
    {
      std::unique_lock<std::mutex> lock;
      if (auto* mu = dep->xapp_mutex()) lock = std::unique_lock<std::mutex>(*mu);
      for (auto& lx : live) {
        lx.app->stop();
        result.epochs[lx.id] = lx.app->epochs();
      }
    }
    live.clear();
    dep.reset();
  } catch (const std::exception& e) {
    for (auto& f : csv_files) f->flush();
    ric_log.flush();
    meta["finished_at"] = utc_now();
    meta["status"] = "crashed";
    meta["component"] = component;
    meta["error"] = e.what();
    write_meta(dir, meta);
    log::error("run failed in " + component + ": " + e.what());
    const auto* err = dynamic_cast<const Error*>(&e);
    if (err && err->code() == ErrorCode::kComponentCrash) throw;
    throw Error(ErrorCode::kComponentCrash, component, e.what());
  }

  for (auto& f : csv_files) f->close();
  ric_log.close();
  result.summary = export_summary(plan.output_dir);
  meta["finished_at"] = utc_now();
  meta["status"] = "ok";
  meta["wall_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - wall_start).count();
  meta["simulated_ms"] = result.simulated_ms;
  write_meta(dir, meta);
  return result;
}

}  // namespace orgym::harness
