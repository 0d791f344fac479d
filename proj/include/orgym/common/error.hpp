// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orgym {

enum class ErrorCode {
  kMalformedJson,
  kOverlappingRbgRanges,
  kUnknownPolicyCode,
  kDuplicateUe,
  kRangeOutOfBounds,
  kUnknownUe,
  kUnknownSlice,
  kInvalidValue,
  kBodyTooLarge,
  kDuplicateNode,
  kUnknownNode,
  kUnknownXapp,
  kPeriodTooSmall,
  kUnknownSubscription,
  kTimeout,
  kInsufficientHistory,
  kInvalidShare,
  kMissingSlice,
  kActionSpaceTooLarge,
  kNonFiniteGradient,
  kSchemaMismatch,
  kTimelineConflict,
  kComponentCrash,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Typed failure carrying the offending key (config path, column name, id).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string key, const std::string& detail = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& key() const noexcept { return key_; }

 private:
  ErrorCode code_;
  std::string key_;
};

}  // namespace orgym
