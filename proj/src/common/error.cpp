// SPDX-License-Identifier: Apache-2.0
#include "orgym/common/error.hpp"

namespace orgym {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedJson: return "MalformedJson";
    case ErrorCode::kOverlappingRbgRanges: return "OverlappingRbgRanges";
    case ErrorCode::kUnknownPolicyCode: return "UnknownPolicyCode";
    case ErrorCode::kDuplicateUe: return "DuplicateUe";
    case ErrorCode::kRangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::kUnknownUe: return "UnknownUe";
    case ErrorCode::kUnknownSlice: return "UnknownSlice";
    case ErrorCode::kInvalidValue: return "InvalidValue";
    case ErrorCode::kBodyTooLarge: return "BodyTooLarge";
    case ErrorCode::kDuplicateNode: return "DuplicateNode";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kUnknownXapp: return "UnknownXapp";
    case ErrorCode::kPeriodTooSmall: return "PeriodTooSmall";
    case ErrorCode::kUnknownSubscription: return "UnknownSubscription";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kInsufficientHistory: return "InsufficientHistory";
    case ErrorCode::kInvalidShare: return "InvalidShare";
    case ErrorCode::kMissingSlice: return "MissingSlice";
    case ErrorCode::kActionSpaceTooLarge: return "ActionSpaceTooLarge";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kTimelineConflict: return "TimelineConflict";
    case ErrorCode::kComponentCrash: return "ComponentCrash";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& key, const std::string& detail) {
  std::string msg(to_string(code));
  if (!key.empty()) msg += " [" + key + "]";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(ErrorCode code, std::string key, const std::string& detail)
    : std::runtime_error(compose(code, key, detail)), code_(code), key_(std::move(key)) {}

}  // namespace orgym
