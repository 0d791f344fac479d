// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace orgym::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

// Reads ORGYM_LOG (debug|info|warn|error|off) once; defaults to warn.
Level threshold();
void set_threshold(Level level);

void write(Level level, std::string_view msg);

inline void debug(std::string_view msg) { write(Level::kDebug, msg); }
inline void info(std::string_view msg) { write(Level::kInfo, msg); }
inline void warn(std::string_view msg) { write(Level::kWarn, msg); }
inline void error(std::string_view msg) { write(Level::kError, msg); }

}  // namespace orgym::log
