// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "orgym/common/error.hpp"
#include "orgym/e2/codec.hpp"
#include "support/e2_generators.hpp"

using namespace orgym;
using namespace orgym::e2;

namespace {

Bytes frame_of(std::uint8_t type, const std::string& body) {
  const std::uint32_t len = static_cast<std::uint32_t>(body.size() + 1);
  Bytes out = {static_cast<std::uint8_t>(len >> 24), static_cast<std::uint8_t>(len >> 16),
               static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len), type};
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

}  // namespace

TEST_CASE("empty protocol error encodes to the golden bytes") {
  const Bytes expected = {0x00, 0x00, 0x00, 0x03, 0x08, 0x7B, 0x7D};
  CHECK(encode_frame(E2Message{0, ProtocolError{}}) == expected);
}

TEST_CASE("setup request body is canonical json with sorted keys") {
  E2Message msg{7, E2SetupRequest{NodeId("gnb:311-048-01000501"), 100, 17}};
  const std::string body = R"({"kpm_window_ms":100,"node_id":"gnb:311-048-01000501","rbg_count":17,"transaction_id":7})";
  CHECK(encode_body(msg) == body);
  CHECK(encode_frame(msg) == frame_of(0x01, body));
}

TEST_CASE("decoding accepts keys in any order") {
  const auto r = decode_frame(frame_of(0x01, R"({"rbg_count":17,"node_id":"gnb:311-048-01000501","kpm_window_ms":100})"));
  REQUIRE(r.ok());
  const auto* setup = r.message->as<E2SetupRequest>();
  REQUIRE(setup);
  CHECK(setup->rbg_count == 17);
  CHECK(r.message->transaction_id == 0u);
}

TEST_CASE("round trip of 10^4 random messages") {
  testing::MessageGenerator gen(20240611);
  for (int i = 0; i < 10000; ++i) {
    const E2Message msg = gen.next();
    const Bytes frame = encode_frame(msg);
    const auto r = decode_frame(frame);
    REQUIRE_MESSAGE(r.ok(), "case " << i << ": " << r.detail);
    CHECK(r.consumed == frame.size());
    REQUIRE(*r.message == msg);
    // re-encoding a decoded message is byte-identical
    CHECK(encode_frame(*r.message) == frame);
  }
}

TEST_CASE("short and oversized input") {
  const Bytes frame = encode_frame(E2Message{0, ProtocolError{"x", "y"}});
  for (std::size_t n = 0; n < frame.size(); ++n) {
    const auto r = decode_prefix(std::span<const std::uint8_t>(frame.data(), n));
    CHECK(r.status == DecodeStatus::kNeedMoreBytes);
  }
  const Bytes three = {0x00, 0x00, 0x00};
  CHECK(decode_frame(three).status == DecodeStatus::kNeedMoreBytes);

  Bytes trailing = frame;
  trailing.push_back(0x00);
  CHECK(decode_frame(trailing).status == DecodeStatus::kLengthMismatch);
  CHECK(decode_prefix(trailing).ok());

  const Bytes zero_len = {0, 0, 0, 0};
  CHECK(decode_frame(zero_len).status == DecodeStatus::kLengthMismatch);
  const Bytes huge = {0x7f, 0xff, 0xff, 0xff, 0x01};
  CHECK(decode_frame(huge).status == DecodeStatus::kLengthMismatch);
}

TEST_CASE("unknown type and malformed bodies") {
  const auto unknown = decode_frame(frame_of(0x7F, "{}"));
  CHECK(unknown.status == DecodeStatus::kUnknownMsgType);
  CHECK(unknown.consumed == 7);
  CHECK(decode_frame(frame_of(0x00, "{}")).status == DecodeStatus::kUnknownMsgType);

  CHECK(decode_frame(frame_of(0x08, "{")).status == DecodeStatus::kMalformedBody);
  CHECK(decode_frame(frame_of(0x08, "[]")).status == DecodeStatus::kMalformedBody);
  CHECK(decode_frame(frame_of(0x01, R"({"node_id":"gnb:1-2-3","kpm_window_ms":1,"rbg_count":1})")).status ==
        DecodeStatus::kMalformedBody);
  CHECK(decode_frame(frame_of(0x02, R"({"node_id":"gnb:311-048-01000501","status":"maybe"})")).status ==
        DecodeStatus::kMalformedBody);
  CHECK(decode_frame(frame_of(0x04, R"({"node_id":"gnb:311-048-01000501","status":"accepted","sub_id":-1})"))
            .status == DecodeStatus::kMalformedBody);
  CHECK(decode_frame(frame_of(0x08, "{\"cause\":\"\xff\"}")).status == DecodeStatus::kMalformedBody);
}

TEST_CASE("oversized body is refused at encode time") {
  ProtocolError big{std::string(kMaxBodyBytes, 'a'), {}};
  try {
    encode_frame(E2Message{0, big});
    FAIL("expected BodyTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBodyTooLarge);
  }
}

TEST_CASE("10^5 fuzzed frames never crash the decoder") {
  testing::MessageGenerator gen(77);
  std::mt19937_64& rng = gen.rng();
  std::size_t ok = 0;
  for (int i = 0; i < 100000; ++i) {
    Bytes frame = encode_frame(gen.next());
    switch (rng() % 4) {
      case 0: {  // random byte flips
        const int flips = 1 + static_cast<int>(rng() % 4);
        for (int f = 0; f < flips; ++f) frame[rng() % frame.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        break;
      }
      case 1:  // truncation
        frame.resize(rng() % frame.size());
        break;
      case 2: {  // random garbage
        frame.resize(rng() % 64);
        for (auto& b : frame) b = static_cast<std::uint8_t>(rng());
        break;
      }
      default:  // insertion inside the body
        frame.insert(frame.begin() + static_cast<long>(5 + rng() % (frame.size() - 4)),
                     static_cast<std::uint8_t>(rng()));
        break;
    }
    const auto r = decode_frame(frame);
    if (r.ok()) {
      ++ok;
      CHECK(r.consumed == frame.size());
      // anything accepted must re-encode and decode to the same value
      const auto again = decode_frame(encode_frame(*r.message));
      REQUIRE(again.ok());
      CHECK(*again.message == *r.message);
    } else {
      CHECK(!r.message.has_value());
    }
  }
  MESSAGE("fuzz cases decoding cleanly: " << ok);
}

TEST_CASE("frame reader reassembles an arbitrarily chunked stream") {
  testing::MessageGenerator gen(5);
  std::vector<E2Message> sent;
  Bytes stream;
  for (int i = 0; i < 300; ++i) {
    sent.push_back(gen.next());
    const Bytes f = encode_frame(sent.back());
    stream.insert(stream.end(), f.begin(), f.end());
    if (i == 100) {  // an unknown-type frame in the middle is skipped, not fatal
      const Bytes junk = frame_of(0x55, "{}");
      stream.insert(stream.end(), junk.begin(), junk.end());
    }
  }
  FrameReader reader;
  std::vector<E2Message> got;
  int unknown = 0;
  std::mt19937 rng(9);
  std::size_t pos = 0;
  while (pos < stream.size()) {
    const std::size_t n = std::min<std::size_t>(stream.size() - pos, 1 + rng() % 200);
    reader.feed(std::span<const std::uint8_t>(stream.data() + pos, n));
    pos += n;
    for (auto r = reader.next(); r.status != DecodeStatus::kNeedMoreBytes; r = reader.next()) {
      if (r.ok()) got.push_back(*r.message);
      if (r.status == DecodeStatus::kUnknownMsgType) ++unknown;
    }
  }
  CHECK(unknown == 1);
  CHECK(reader.buffered() == 0);
  CHECK(got == sent);
}

TEST_CASE("frame reader is poisoned by an impossible length") {
  FrameReader reader;
  const Bytes bad = {0, 0, 0, 0, 0x08, '{', '}'};
  reader.feed(bad);
  CHECK(reader.next().status == DecodeStatus::kLengthMismatch);
  CHECK(reader.poisoned());
  reader.feed(encode_frame(E2Message{0, ProtocolError{}}));
  CHECK(reader.next().status == DecodeStatus::kLengthMismatch);
}

TEST_CASE("node ids") {
  CHECK(NodeId::is_valid("gnb:311-048-01000501"));
  CHECK(NodeId::is_valid("gnb:001-999-ABCDEF09"));
  CHECK_FALSE(NodeId::is_valid("gnb:311-048-0100050"));
  CHECK_FALSE(NodeId::is_valid("enb:311-048-01000501"));
  CHECK_FALSE(NodeId::is_valid("gnb:31a-048-01000501"));
  CHECK_FALSE(NodeId::is_valid("gnb:311-048-0100050g"));
  CHECK_THROWS_AS(NodeId("gnb:"), Error);
}
