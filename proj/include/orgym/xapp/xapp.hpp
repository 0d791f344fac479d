// SPDX-License-Identifier: Apache-2.0
// xApp runtime: the SM connector (subscribe, collect indications, send
// controls) driving a feature processor and a decision model.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "orgym/ric/clock.hpp"
#include "orgym/xapp/client.hpp"
#include "orgym/xapp/model.hpp"

namespace orgym::xapp {

inline constexpr int kDefaultDecisionReports = 4;
inline constexpr int kSubscribeAttempts = 3;
inline constexpr std::int64_t kSubscribeBackoffMs = 100;  // doubled per retry

struct XAppDescriptor {
  std::string xapp_id;
  std::vector<e2::NodeId> targets;  // features and controls use targets[0]
  int report_period_ms = 250;
  std::vector<std::string> metric_set;
  int decision_reports = kDefaultDecisionReports;  // indications per decision epoch
  int window_count = kDefaultWindowCount;
  std::vector<ran::SliceId> slices;  // feature order; empty = as observed
};

XAppDescriptor descriptor_from_json(const std::string& text);
std::string descriptor_to_json(const XAppDescriptor& d);

struct EpochRecord {
  std::int64_t epoch = 0;
  std::int64_t ts_ms = 0;  // newest KPM window behind the decision
  std::int64_t decided_at_ms = 0;
  FeatureVector features;
  int action_id = -1;
  bool sent = false;
  std::string ack_status;  // applied | rejected | timeout | noop | pending
  std::string ack_reason;
  std::int64_t acked_at_ms = -1;
  std::int64_t effective_tti = -1;
};

class XApp : public ric::XappSink {
 public:
  XApp(XAppDescriptor descriptor, std::unique_ptr<FeatureProcessor> processor, std::unique_ptr<DecisionModel> model,
       RicClient& client, const ric::Clock& clock);
  ~XApp() override;

  // Writes `epoch,ts_ms,f0..fn,action_id,ack_status` rows, one per epoch,
  // once the epoch's outcome is known.
  void set_decision_log(std::ostream* out) { log_ = out; }
  // Observes every indication's records as they arrive.
  void set_record_listener(std::function<void(const std::vector<ran::KpmRecord>&)> fn) { listener_ = std::move(fn); }

  void start();
  void stop();
  // Drives subscription retries; call with the current time.
  void poll();

  bool failed() const { return failed_; }
  const std::string& diagnostic() const { return diagnostic_; }
  bool subscribed() const { return subscribed_; }
  const XAppDescriptor& descriptor() const { return desc_; }
  const std::vector<EpochRecord>& epochs() const { return epochs_; }
  const std::vector<FeatureVector>& feature_history() const { return feature_history_; }
  std::size_t indications_received() const { return indications_; }

  void on_indication(const e2::RicIndication& indication) override;
  void on_subscription_response(std::uint32_t tag, const e2::RicSubscriptionResponse& response) override;
  void on_control_ack(std::uint32_t tag, const e2::RicControlAck& ack) override;

 private:
  void decide_epoch(std::int64_t ts_ms);
  void write_row(const EpochRecord& rec);
  void subscribe_attempt();

  XAppDescriptor desc_;
  std::unique_ptr<FeatureProcessor> processor_;
  std::unique_ptr<DecisionModel> model_;
  RicClient& client_;
  const ric::Clock& clock_;
  WindowStore store_;
  std::ostream* log_ = nullptr;
  bool header_written_ = false;
  std::function<void(const std::vector<ran::KpmRecord>&)> listener_;

  bool started_ = false;
  bool subscribed_ = false;
  bool failed_ = false;
  std::string diagnostic_;
  int attempts_ = 0;
  std::optional<std::int64_t> retry_at_ms_;

  std::size_t indications_ = 0;
  std::vector<EpochRecord> epochs_;
  std::vector<FeatureVector> feature_history_;
  std::map<std::uint32_t, std::pair<std::size_t, Decision>> in_flight_;  // tag -> (epoch index, decision)
};

}  // namespace orgym::xapp
