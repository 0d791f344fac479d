// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orgym/e2/messages.hpp"

namespace orgym::e2 {

// Frame layout: u32 big-endian length | u8 msg_type | body, where length
// counts the type byte plus the body and the body is canonical JSON
// (sorted keys, no insignificant whitespace).
inline constexpr std::size_t kHeaderBytes = 4;
inline constexpr std::size_t kMaxBodyBytes = 16u * 1024u * 1024u;
inline constexpr std::uint16_t kDefaultPort = 36421;

using Bytes = std::vector<std::uint8_t>;

// Throws orgym::Error(kBodyTooLarge) when the body exceeds kMaxBodyBytes.
Bytes encode_frame(const E2Message& msg);

// Canonical JSON body alone (what follows the type byte).
std::string encode_body(const E2Message& msg);

enum class DecodeStatus {
  kOk,
  kNeedMoreBytes,
  kUnknownMsgType,
  kMalformedBody,
  kLengthMismatch,
};

std::string_view to_string(DecodeStatus status);

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kNeedMoreBytes;
  std::optional<E2Message> message;
  std::size_t consumed = 0;  // bytes of the frame that produced this result
  std::string detail;

  bool ok() const { return status == DecodeStatus::kOk; }
};

// Decodes exactly one frame occupying all of `bytes`. Total: never throws.
// Trailing bytes after the frame yield kLengthMismatch.
DecodeResult decode_frame(std::span<const std::uint8_t> bytes);

// Decodes the first frame in `bytes`, ignoring anything after it.
DecodeResult decode_prefix(std::span<const std::uint8_t> bytes);

// Streaming reassembly over a byte stream. A frame with an unknown type or a
// malformed body is consumed and reported; an impossible length field
// poisons the stream, since frame boundaries are lost.
class FrameReader {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  // kNeedMoreBytes when no complete frame is buffered.
  DecodeResult next();
  bool poisoned() const { return poisoned_; }
  std::size_t buffered() const { return buffer_.size() - offset_; }

 private:
  Bytes buffer_;
  std::size_t offset_ = 0;
  bool poisoned_ = false;
};

}  // namespace orgym::e2
