// SPDX-License-Identifier: Apache-2.0
#include "orgym/common/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace orgym::log {
namespace {

Level parse_env() {
  const char* env = std::getenv("ORGYM_LOG");
  if (env == nullptr) return Level::kWarn;
  const std::string v(env);
  if (v == "debug") return Level::kDebug;
  if (v == "info") return Level::kInfo;
  if (v == "warn") return Level::kWarn;
  if (v == "error") return Level::kError;
  if (v == "off") return Level::kOff;
  return Level::kWarn;
}

std::atomic<int>& level_storage() {
  static std::atomic<int> level{static_cast<int>(parse_env())};
  return level;
}

std::mutex& sink_mutex() {
  static std::mutex mu;
  return mu;
}

constexpr const char* kNames[] = {"debug", "info", "warn", "error", "off"};

}  // namespace

Level threshold() { return static_cast<Level>(level_storage().load()); }

void set_threshold(Level level) { level_storage().store(static_cast<int>(level)); }

void write(Level level, std::string_view msg) {
  if (level < threshold() || level == Level::kOff) return;
  std::lock_guard<std::mutex> lock(sink_mutex());
  std::cerr << "[orgym " << kNames[static_cast<int>(level)] << "] " << msg << '\n';
}

}  // namespace orgym::log
