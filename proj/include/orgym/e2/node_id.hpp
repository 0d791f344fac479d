// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace orgym::e2 {

// Base-station identifier of the form gnb:<MCC 3 digits>-<MNC 3 digits>-<8 hex digits>,
// e.g. gnb:311-048-01000501. Compared byte for byte.
class NodeId {
 public:
  NodeId() = default;
  // Throws orgym::Error(kInvalidValue) on a malformed id.
  explicit NodeId(std::string text);

  static bool is_valid(std::string_view text);
  static std::optional<NodeId> parse(std::string_view text);

  const std::string& str() const { return text_; }
  bool empty() const { return text_.empty(); }

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend bool operator==(const NodeId&, const NodeId&) = default;

 private:
  std::string text_;
};

}  // namespace orgym::e2
