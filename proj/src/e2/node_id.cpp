// SPDX-License-Identifier: Apache-2.0
#include "orgym/e2/node_id.hpp"

#include "orgym/common/error.hpp"

namespace orgym::e2 {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_hex(char c) { return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'); }

}  // namespace

bool NodeId::is_valid(std::string_view t) {
  // gnb:DDD-DDD-HHHHHHHH
  if (t.size() != 20 || t.substr(0, 4) != "gnb:" || t[7] != '-' || t[11] != '-') return false;
  for (std::size_t i : {4u, 5u, 6u, 8u, 9u, 10u}) {
    if (!is_digit(t[i])) return false;
  }
  for (std::size_t i = 12; i < 20; ++i) {
    if (!is_hex(t[i])) return false;
  }
  return true;
}

NodeId::NodeId(std::string text) : text_(std::move(text)) {
  if (!is_valid(text_)) throw Error(ErrorCode::kInvalidValue, "node_id", "malformed node id '" + text_ + "'");
}

std::optional<NodeId> NodeId::parse(std::string_view text) {
  if (!is_valid(text)) return std::nullopt;
  return NodeId(std::string(text));
}

}  // namespace orgym::e2
