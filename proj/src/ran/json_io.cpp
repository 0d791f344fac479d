// SPDX-License-Identifier: Apache-2.0
#include "orgym/ran/json_io.hpp"

#include <string>

#include "orgym/common/error.hpp"

namespace orgym::ran {

using nlohmann::json;

namespace {

int parse_slice_key(const std::string& text, const std::string& key) {
  if (text.empty() || text.size() > 6) throw Error(ErrorCode::kMalformedJson, key, "bad slice id");
  int value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw Error(ErrorCode::kMalformedJson, key, "bad slice id '" + text + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

int as_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw Error(ErrorCode::kMalformedJson, key, "expected integer");
  return j.get<int>();
}

template <typename T>
T field(const json& j, const char* name, T fallback) {
  auto it = j.find(name);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, name, e.what());
  }
}

}  // namespace

json allocation_to_json(const std::map<SliceId, RbgRange>& allocation) {
  json out = json::object();
  for (const auto& [id, range] : allocation) out[std::to_string(id)] = {range.first, range.last};
  return out;
}

std::map<SliceId, RbgRange> allocation_from_json(const json& j, const std::string& key) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedJson, key, "expected object");
  std::map<SliceId, RbgRange> out;
  for (const auto& [k, v] : j.items()) {
    const std::string sub = key + "." + k;
    const int id = parse_slice_key(k, sub);
    if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::kMalformedJson, sub, "expected [first,last]");
    out[id] = RbgRange{as_int(v[0], sub), as_int(v[1], sub)};
  }
  return out;
}

json directive_to_json(const ControlDirective& directive) {
  json out = json::object();
  out["target"] = directive.target;
  if (directive.slice_allocation) out["slice-allocation"] = allocation_to_json(*directive.slice_allocation);
  if (directive.slice_scheduling_policy) out["slice-scheduling-policy"] = *directive.slice_scheduling_policy;
  return out;
}

ControlDirective directive_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedJson, "directive", "expected object");
  ControlDirective d;
  d.target = field<std::string>(j, "target", "");
  if (auto it = j.find("slice-allocation"); it != j.end()) {
    d.slice_allocation = allocation_from_json(*it, "slice-allocation");
  }
  if (auto it = j.find("slice-scheduling-policy"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::kMalformedJson, "slice-scheduling-policy", "expected array");
    std::vector<int> codes;
    for (const auto& v : *it) codes.push_back(as_int(v, "slice-scheduling-policy"));
    d.slice_scheduling_policy = std::move(codes);
  }
  return d;
}

json kpm_to_json(const KpmRecord& r) {
  return json{{"ts_ms", r.ts_ms},
              {"bs_id", r.bs_id},
              {"slice_id", r.slice_id},
              {"ue_id", r.ue_id},
              {"dl_tx_bytes", r.dl_tx_bytes},
              {"dl_tx_tbs", r.dl_tx_tbs},
              {"dl_buffer_bytes", r.dl_buffer_bytes},
              {"dl_thr_mbps", r.dl_thr_mbps},
              {"rbg_share", r.rbg_share},
              {"sched_policy", r.sched_policy}};
}

KpmRecord kpm_from_json(const json& j) {
  KpmRecord r;
  try {
    r.ts_ms = j.at("ts_ms").get<std::int64_t>();
    r.bs_id = j.at("bs_id").get<std::string>();
    r.slice_id = j.at("slice_id").get<int>();
    r.ue_id = j.at("ue_id").get<int>();
    r.dl_tx_bytes = j.at("dl_tx_bytes").get<std::int64_t>();
    r.dl_tx_tbs = j.at("dl_tx_tbs").get<std::int64_t>();
    r.dl_buffer_bytes = j.at("dl_buffer_bytes").get<std::int64_t>();
    r.dl_thr_mbps = j.at("dl_thr_mbps").get<double>();
    r.rbg_share = j.at("rbg_share").get<double>();
    r.sched_policy = j.at("sched_policy").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, "kpm", e.what());
  }
  return r;
}

json config_to_json(const ScenarioConfig& c) {
  json out = json::object();
  out["network-slicing"] = c.network_slicing;
  out["rbg-count"] = c.rbg_count;
  if (!c.slice_allocation.empty()) out["slice-allocation"] = allocation_to_json(c.slice_allocation);
  if (!c.slice_scheduling_policy.empty()) out["slice-scheduling-policy"] = c.slice_scheduling_policy;
  if (!c.slice_users.empty()) {
    json users = json::object();
    for (const auto& [id, list] : c.slice_users) users[std::to_string(id)] = list;
    out["slice-users"] = users;
  }
  json ues = json::array();
  for (const auto& ue : c.ues) {
    json u{{"id", ue.id}, {"efficiency", ue.efficiency}, {"saturated", ue.saturated}};
    if (!ue.saturated) u["traffic-bps"] = ue.traffic_bps;
    ues.push_back(u);
  }
  out["ues"] = ues;
  if (c.channel.fading) {
    out["channel"] = {{"fading", true}, {"coefficient", c.channel.coefficient}, {"sigma", c.channel.sigma}};
  }
  out["tti-ms"] = c.tti_ms;
  out["kpm-window-ms"] = c.kpm_window_ms;
  out["seed"] = c.seed;
  out["bs-id"] = c.bs_id;
  return out;
}

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kMalformedJson, "", "config must be a JSON object");
  ScenarioConfig c;
  c.rbg_count = field<int>(j, "rbg-count", kDefaultRbgCount);
  c.tti_ms = field<int>(j, "tti-ms", 1);
  c.kpm_window_ms = field<int>(j, "kpm-window-ms", kDefaultKpmWindowMs);
  c.seed = field<std::uint64_t>(j, "seed", 1);
  c.bs_id = field<std::string>(j, "bs-id", kDefaultBsId);

  if (auto it = j.find("slice-allocation"); it != j.end()) {
    c.slice_allocation = allocation_from_json(*it, "slice-allocation");
  }
  c.network_slicing = field<bool>(j, "network-slicing", !c.slice_allocation.empty());

  if (auto it = j.find("slice-scheduling-policy"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::kMalformedJson, "slice-scheduling-policy", "expected array");
    for (const auto& v : *it) c.slice_scheduling_policy.push_back(as_int(v, "slice-scheduling-policy"));
  }

  if (auto it = j.find("slice-users"); it != j.end()) {
    if (!it->is_object()) throw Error(ErrorCode::kMalformedJson, "slice-users", "expected object");
    for (const auto& [k, v] : it->items()) {
      const std::string sub = "slice-users." + k;
      const int id = parse_slice_key(k, sub);
      if (!v.is_array()) throw Error(ErrorCode::kMalformedJson, sub, "expected array");
      auto& list = c.slice_users[id];
      for (const auto& ue : v) list.push_back(as_int(ue, sub));
    }
  }

  if (auto it = j.find("ues"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::kMalformedJson, "ues", "expected array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& u = (*it)[i];
      const std::string sub = "ues[" + std::to_string(i) + "]";
      if (!u.is_object() || !u.contains("id")) throw Error(ErrorCode::kMalformedJson, sub, "expected {\"id\":...}");
      UeSpec spec;
      spec.id = as_int(u["id"], sub + ".id");
      spec.efficiency = field<double>(u, "efficiency", kDefaultEfficiency);
      spec.traffic_bps = field<double>(u, "traffic-bps", 0.0);
      spec.saturated = field<bool>(u, "saturated", !u.contains("traffic-bps"));
      c.ues.push_back(spec);
    }
  } else {
    for (const auto& [slice, list] : c.slice_users) {
      for (UeId id : list) c.ues.push_back(UeSpec{id, kDefaultEfficiency, 0.0, true});
    }
  }

  if (auto it = j.find("channel"); it != j.end()) {
    if (!it->is_object()) throw Error(ErrorCode::kMalformedJson, "channel", "expected object");
    c.channel.fading = field<bool>(*it, "fading", false);
    c.channel.coefficient = field<double>(*it, "coefficient", 0.99);
    c.channel.sigma = field<double>(*it, "sigma", 0.0);
  }
  return c;
}

}  // namespace orgym::ran
