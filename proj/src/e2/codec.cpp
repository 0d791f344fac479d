// SPDX-License-Identifier: Apache-2.0
#include "orgym/e2/codec.hpp"

#include <limits>

#include <json.hpp>

#include "orgym/common/error.hpp"
#include "orgym/ran/json_io.hpp"

namespace orgym::e2 {

using nlohmann::json;

namespace {

// Thrown inside body parsing; always caught before leaving this file.
struct BodyError {
  std::string detail;
};

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw BodyError{std::string("missing '") + key + "'"};
  return *it;
}

std::uint64_t get_uint(const json& j, const char* key, std::uint64_t max) {
  const json& v = require(j, key);
  if (!v.is_number_unsigned()) {
    if (!(v.is_number_integer() && v.get<std::int64_t>() == 0)) {
      throw BodyError{std::string("'") + key + "' must be an unsigned integer"};
    }
    return 0;
  }
  const auto value = v.get<std::uint64_t>();
  if (value > max) throw BodyError{std::string("'") + key + "' out of range"};
  return value;
}

std::int64_t get_int(const json& j, const char* key, std::int64_t min, std::int64_t max) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) throw BodyError{std::string("'") + key + "' must be an integer"};
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(max)) {
    throw BodyError{std::string("'") + key + "' out of range"};
  }
  const auto value = v.get<std::int64_t>();
  if (value < min || value > max) throw BodyError{std::string("'") + key + "' out of range"};
  return value;
}

std::string get_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw BodyError{std::string("'") + key + "' must be a string"};
  return v.get<std::string>();
}

std::string optional_string(const json& j, const char* key) {
  return j.contains(key) ? get_string(j, key) : std::string();
}

NodeId get_node(const json& j) {
  auto id = NodeId::parse(get_string(j, "node_id"));
  if (!id) throw BodyError{"malformed node_id"};
  return *id;
}

Status get_status(const json& j) {
  const auto s = get_string(j, "status");
  if (s == "accepted") return Status::kAccepted;
  if (s == "rejected") return Status::kRejected;
  if (s == "applied") return Status::kApplied;
  if (s == "timeout") return Status::kTimeout;
  throw BodyError{"unknown status '" + s + "'"};
}

constexpr std::int64_t kI32Max = std::numeric_limits<std::int32_t>::max();
constexpr std::int64_t kI32Min = std::numeric_limits<std::int32_t>::min();
constexpr std::int64_t kI64Max = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kI64Min = std::numeric_limits<std::int64_t>::min();

void put_optional(json& j, const char* key, const std::string& value) {
  if (!value.empty()) j[key] = value;
}

json body_to_json(const MessageBody& body) {
  json j = json::object();
  std::visit(
      [&j](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, E2SetupRequest>) {
          j["node_id"] = m.node_id.str();
          j["kpm_window_ms"] = m.kpm_window_ms;
          j["rbg_count"] = m.rbg_count;
        } else if constexpr (std::is_same_v<T, E2SetupResponse>) {
          j["node_id"] = m.node_id.str();
          j["status"] = to_string(m.status);
          put_optional(j, "reason", m.reason);
        } else if constexpr (std::is_same_v<T, RicSubscriptionRequest>) {
          j["sub_id"] = m.sub_id;
          j["node_id"] = m.node_id.str();
          j["xapp_id"] = m.xapp_id;
          j["report_period_ms"] = m.report_period_ms;
          j["metric_set"] = m.metric_set;
        } else if constexpr (std::is_same_v<T, RicSubscriptionResponse>) {
          j["sub_id"] = m.sub_id;
          j["node_id"] = m.node_id.str();
          j["status"] = to_string(m.status);
          put_optional(j, "reason", m.reason);
        } else if constexpr (std::is_same_v<T, RicIndication>) {
          j["sub_id"] = m.sub_id;
          j["node_id"] = m.node_id.str();
          j["seq"] = m.seq;
          j["ts_ms"] = m.ts_ms;
          json records = json::array();
          for (const auto& r : m.records) records.push_back(ran::kpm_to_json(r));
          j["records"] = std::move(records);
        } else if constexpr (std::is_same_v<T, RicControlRequest>) {
          j["node_id"] = m.node_id.str();
          j["xapp_id"] = m.xapp_id;
          j["directive"] = ran::directive_to_json(m.directive);
        } else if constexpr (std::is_same_v<T, RicControlAck>) {
          j["node_id"] = m.node_id.str();
          j["status"] = to_string(m.status);
          put_optional(j, "reason", m.reason);
          j["effective_tti"] = m.effective_tti;
        } else if constexpr (std::is_same_v<T, ProtocolError>) {
          put_optional(j, "cause", m.cause);
          put_optional(j, "detail", m.detail);
        }
      },
      body);
  return j;
}

MessageBody body_from_json(MsgType type, const json& j) {
  switch (type) {
    case MsgType::kE2SetupRequest:
      return E2SetupRequest{get_node(j), static_cast<int>(get_int(j, "kpm_window_ms", kI32Min, kI32Max)),
                            static_cast<int>(get_int(j, "rbg_count", kI32Min, kI32Max))};
    case MsgType::kE2SetupResponse:
      return E2SetupResponse{get_node(j), get_status(j), optional_string(j, "reason")};
    case MsgType::kRicSubscriptionRequest: {
      RicSubscriptionRequest m;
      m.sub_id = static_cast<std::uint32_t>(get_uint(j, "sub_id", 0xffffffffu));
      m.node_id = get_node(j);
      m.xapp_id = get_string(j, "xapp_id");
      m.report_period_ms = static_cast<int>(get_int(j, "report_period_ms", kI32Min, kI32Max));
      const json& metrics = require(j, "metric_set");
      if (!metrics.is_array()) throw BodyError{"'metric_set' must be an array"};
      for (const auto& name : metrics) {
        if (!name.is_string()) throw BodyError{"metric names must be strings"};
        m.metric_set.push_back(name.get<std::string>());
      }
      return m;
    }
    case MsgType::kRicSubscriptionResponse:
      return RicSubscriptionResponse{static_cast<std::uint32_t>(get_uint(j, "sub_id", 0xffffffffu)), get_node(j),
                                     get_status(j), optional_string(j, "reason")};
    case MsgType::kRicIndication: {
      RicIndication m;
      m.sub_id = static_cast<std::uint32_t>(get_uint(j, "sub_id", 0xffffffffu));
      m.node_id = get_node(j);
      m.seq = get_uint(j, "seq", std::numeric_limits<std::uint64_t>::max());
      m.ts_ms = get_int(j, "ts_ms", kI64Min, kI64Max);
      const json& records = require(j, "records");
      if (!records.is_array()) throw BodyError{"'records' must be an array"};
      for (const auto& r : records) {
        if (!r.is_object()) throw BodyError{"records must be objects"};
        m.records.push_back(ran::kpm_from_json(r));
      }
      return m;
    }
    case MsgType::kRicControlRequest:
      return RicControlRequest{get_node(j), get_string(j, "xapp_id"),
                               ran::directive_from_json(require(j, "directive"))};
    case MsgType::kRicControlAck:
      return RicControlAck{get_node(j), get_status(j), optional_string(j, "reason"),
                           get_int(j, "effective_tti", kI64Min, kI64Max)};
    case MsgType::kProtocolError:
      return ProtocolError{optional_string(j, "cause"), optional_string(j, "detail")};
  }
  throw BodyError{"unreachable"};
}

bool known_type(std::uint8_t code) { return code >= 0x01 && code <= 0x08; }

std::uint32_t read_be32(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) | (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | static_cast<std::uint32_t>(p[3]);
}

DecodeResult fail(DecodeStatus status, std::size_t consumed, std::string detail) {
  DecodeResult r;
  r.status = status;
  r.consumed = consumed;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

std::string_view to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::kOk: return "Ok";
    case DecodeStatus::kNeedMoreBytes: return "NeedMoreBytes";
    case DecodeStatus::kUnknownMsgType: return "UnknownMsgType";
    case DecodeStatus::kMalformedBody: return "MalformedBody";
    case DecodeStatus::kLengthMismatch: return "LengthMismatch";
  }
  return "Unknown";
}

std::string encode_body(const E2Message& msg) {
  json j = body_to_json(msg.body);
  if (msg.transaction_id != 0) j["transaction_id"] = msg.transaction_id;
  return j.dump();
}

Bytes encode_frame(const E2Message& msg) {
  const std::string body = encode_body(msg);
  if (body.size() > kMaxBodyBytes) {
    throw Error(ErrorCode::kBodyTooLarge, std::string(to_string(msg.type())),
                std::to_string(body.size()) + " bytes");
  }
  const auto length = static_cast<std::uint32_t>(body.size() + 1);
  Bytes out;
  out.reserve(kHeaderBytes + length);
  out.push_back(static_cast<std::uint8_t>(length >> 24));
  out.push_back(static_cast<std::uint8_t>(length >> 16));
  out.push_back(static_cast<std::uint8_t>(length >> 8));
  out.push_back(static_cast<std::uint8_t>(length));
  out.push_back(static_cast<std::uint8_t>(msg.type()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

DecodeResult decode_prefix(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) return fail(DecodeStatus::kNeedMoreBytes, 0, "short header");
  const std::uint32_t length = read_be32(bytes.data());
  if (length == 0 || length > kMaxBodyBytes + 1) {
    return fail(DecodeStatus::kLengthMismatch, 0, "impossible frame length " + std::to_string(length));
  }
  const std::size_t total = kHeaderBytes + length;
  if (bytes.size() < total) return fail(DecodeStatus::kNeedMoreBytes, 0, "short frame");

  const std::uint8_t code = bytes[kHeaderBytes];
  if (!known_type(code)) return fail(DecodeStatus::kUnknownMsgType, total, "msg_type " + std::to_string(code));
  const auto type = static_cast<MsgType>(code);

  const char* body_begin = reinterpret_cast<const char*>(bytes.data() + kHeaderBytes + 1);
  const char* body_end = reinterpret_cast<const char*>(bytes.data() + total);
  json j = json::parse(body_begin, body_end, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return fail(DecodeStatus::kMalformedBody, total, "body is not a JSON object");

  DecodeResult r;
  r.consumed = total;
  try {
    E2Message msg;
    msg.body = body_from_json(type, j);
    if (j.contains("transaction_id")) {
      msg.transaction_id = static_cast<std::uint32_t>(get_uint(j, "transaction_id", 0xffffffffu));
    }
    r.status = DecodeStatus::kOk;
    r.message = std::move(msg);
  } catch (const BodyError& e) {
    return fail(DecodeStatus::kMalformedBody, total, e.detail);
  } catch (const Error& e) {
    return fail(DecodeStatus::kMalformedBody, total, e.what());
  } catch (const json::exception& e) {
    return fail(DecodeStatus::kMalformedBody, total, e.what());
  }
  return r;
}

DecodeResult decode_frame(std::span<const std::uint8_t> bytes) {
  DecodeResult r = decode_prefix(bytes);
  if (r.status == DecodeStatus::kNeedMoreBytes || r.status == DecodeStatus::kLengthMismatch) return r;
  if (r.consumed != bytes.size()) {
    return fail(DecodeStatus::kLengthMismatch, r.consumed,
                std::to_string(bytes.size() - r.consumed) + " trailing bytes after frame");
  }
  return r;
}

void FrameReader::feed(std::span<const std::uint8_t> bytes) {
  if (poisoned_) return;
  if (offset_ > 0 && offset_ == buffer_.size()) {
    buffer_.clear();
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

DecodeResult FrameReader::next() {
  if (poisoned_) return fail(DecodeStatus::kLengthMismatch, 0, "stream poisoned");
  DecodeResult r = decode_prefix(std::span<const std::uint8_t>(buffer_).subspan(offset_));
  if (r.status == DecodeStatus::kLengthMismatch) {
    poisoned_ = true;
    return r;
  }
  offset_ += r.consumed;
  if (offset_ > 4096 && offset_ * 2 > buffer_.size()) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
    offset_ = 0;
  }
  return r;
}

}  // namespace orgym::e2
