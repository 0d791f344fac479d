// SPDX-License-Identifier: Apache-2.0
#include "orgym/xapp/xapp.hpp"

#include <cstdio>
#include <json.hpp>

#include "orgym/common/error.hpp"
#include "orgym/common/log.hpp"

namespace orgym::xapp {

using nlohmann::json;

XAppDescriptor descriptor_from_json(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::kMalformedJson, "xapp", "not a JSON object");
  try {
    XAppDescriptor d;
    d.xapp_id = j.at("xapp-id").get<std::string>();
    for (const auto& t : j.value("targets", json::array())) d.targets.emplace_back(t.get<std::string>());
    d.report_period_ms = j.value("report-period-ms", d.report_period_ms);
    d.metric_set = j.value("metric-set", d.metric_set);
    d.decision_reports = j.value("decision-reports", d.decision_reports);
    d.window_count = j.value("window-count", d.window_count);
    d.slices = j.value("slices", d.slices);
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, "xapp", e.what());
  }
}

std::string descriptor_to_json(const XAppDescriptor& d) {
  json j;
  j["xapp-id"] = d.xapp_id;
  j["targets"] = json::array();
  for (const auto& t : d.targets) j["targets"].push_back(t.str());
  j["report-period-ms"] = d.report_period_ms;
  j["metric-set"] = d.metric_set;
  j["decision-reports"] = d.decision_reports;
  j["window-count"] = d.window_count;
  j["slices"] = d.slices;
  return j.dump();
}

XApp::XApp(XAppDescriptor descriptor, std::unique_ptr<FeatureProcessor> processor,
           std::unique_ptr<DecisionModel> model, RicClient& client, const ric::Clock& clock)
    : desc_(std::move(descriptor)),
      processor_(std::move(processor)),
      model_(std::move(model)),
      client_(client),
      clock_(clock),
      store_(64, desc_.targets.empty() ? std::string{} : desc_.targets[0].str()) {
  if (desc_.targets.empty()) throw Error(ErrorCode::kInvalidValue, "targets", "an xApp needs a target node");
}

XApp::~XApp() { stop(); }

void XApp::start() {
  if (started_) return;
  started_ = true;
  client_.attach(desc_.xapp_id, this);
  subscribe_attempt();
}

void XApp::stop() {
  if (!started_) return;
  started_ = false;
  client_.detach();
}

void XApp::subscribe_attempt() {
  ++attempts_;
  retry_at_ms_.reset();
  client_.subscribe(desc_.targets[0], desc_.report_period_ms, desc_.metric_set, static_cast<std::uint32_t>(attempts_));
}

void XApp::poll() {
  if (retry_at_ms_ && clock_.now_ms() >= *retry_at_ms_) subscribe_attempt();
}

void XApp::on_subscription_response(std::uint32_t, const e2::RicSubscriptionResponse& resp) {
  if (resp.status == e2::Status::kAccepted) {
    subscribed_ = true;
    return;
  }
  if (attempts_ >= kSubscribeAttempts) {
    failed_ = true;
    diagnostic_ = desc_.xapp_id + ": subscription to " + desc_.targets[0].str() + " failed after " +
                  std::to_string(attempts_) + " attempts: " + resp.reason;
    log::error(diagnostic_);
    stop();
    return;
  }
  retry_at_ms_ = clock_.now_ms() + (kSubscribeBackoffMs << (attempts_ - 1));
  log::warn(desc_.xapp_id + ": subscription rejected (" + resp.reason + "), retrying");
}

void XApp::on_indication(const e2::RicIndication& ind) {
  ++indications_;
  store_.add(ind.records);
  if (listener_) listener_(ind.records);
  if (desc_.decision_reports > 0 && indications_ % static_cast<std::size_t>(desc_.decision_reports) == 0) {
    decide_epoch(store_.latest_ts().value_or(ind.ts_ms));
  }
}

void XApp::decide_epoch(std::int64_t ts_ms) {
  FeatureVector features;
  try {
    features = processor_->process(store_);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInsufficientHistory) throw;
    log::debug(desc_.xapp_id + ": " + e.what());
    return;
  }
  feature_history_.push_back(features);

  EpochRecord rec;
  rec.epoch = static_cast<std::int64_t>(epochs_.size());
  rec.ts_ms = ts_ms;
  rec.decided_at_ms = clock_.now_ms();
  rec.features = features;
  const auto decision = model_->decide(features);
  if (!decision) {
    rec.ack_status = "noop";
    epochs_.push_back(rec);
    write_row(rec);
    return;
  }
  rec.action_id = decision->action_id;
  rec.sent = true;
  rec.ack_status = "pending";
  epochs_.push_back(rec);
  const auto tag = static_cast<std::uint32_t>(rec.epoch + 1);
  in_flight_[tag] = {epochs_.size() - 1, *decision};
  client_.control(decision->directive, tag);
}

void XApp::on_control_ack(std::uint32_t tag, const e2::RicControlAck& ack) {
  auto it = in_flight_.find(tag);
  if (it == in_flight_.end()) return;
  auto [index, decision] = it->second;
  in_flight_.erase(it);
  EpochRecord& rec = epochs_[index];
  rec.ack_status = std::string(e2::to_string(ack.status));
  rec.ack_reason = ack.reason;
  rec.acked_at_ms = clock_.now_ms();
  rec.effective_tti = ack.effective_tti;
  if (ack.status != e2::Status::kApplied) {
    log::warn(desc_.xapp_id + ": control " + rec.ack_status + " " + ack.reason);
  }
  model_->on_ack(decision, ack);
  write_row(rec);
}

void XApp::write_row(const EpochRecord& rec) {
  if (log_ == nullptr) return;
  char buf[64];
  if (!header_written_) {
    *log_ << "epoch,ts_ms";
    for (std::size_t i = 0; i < rec.features.size(); ++i) *log_ << ",f" << i;
    *log_ << ",action_id,ack_status\n";
    header_written_ = true;
  }
  *log_ << rec.epoch << ',' << rec.ts_ms;
  for (double f : rec.features) {
    std::snprintf(buf, sizeof(buf), ",%.6f", f);
    *log_ << buf;
  }
  *log_ << ',' << rec.action_id << ',' << rec.ack_status << '\n';
}

}  // namespace orgym::xapp
