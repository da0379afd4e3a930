#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "swarmwatch/error.hpp"
#include "swarmwatch/protocol.hpp"

using namespace swarmwatch;
using namespace swarmwatch::wire;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

BoxSet random_boxes(std::mt19937_64& rng, std::size_t n, double extent) {
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<std::uint32_t> ids(256);
  for (std::uint32_t k = 0; k < 256; ++k) ids[k] = k;
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(n);
  std::vector<BoundingBox> boxes;
  for (std::size_t k = 0; k < n; ++k) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    boxes.emplace_back(a, c, b + 1e-3 < extent ? b + 1e-3 : extent, d + 1e-3 < extent ? d + 1e-3 : extent);
  }
  return BoxSet(boxes, ids);
}

}  // namespace

TEST_CASE("documented hex examples") {
  const BoxSet one({BoundingBox(0, 0, 4096, 2048)}, {7});
  CHECK(serialize(encode_boxes(one)) ==
        Bytes{0x01, 0x0A, 0x00, 0x01, 0x07, 0x00, 0x00, 0x00, 0x00, 0xFF, 0xFF, 0x00, 0x80});

  const std::vector<float> h{1.0f, -2.5f};
  CHECK(serialize(encode_hidden(2, h)) ==
        Bytes{0x02, 0x09, 0x00, 0x02, 0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x20, 0xC0});

  CHECK(serialize(encode_goal_claim({3, 5})) == Bytes{0x03, 0x02, 0x00, 0x03, 0x05});
}

TEST_CASE("payload sizes follow the closed forms") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0, 1, 9, 20, 255}) {
    CHECK(encode_boxes(random_boxes(rng, n, 4096)).payload.size() == 1 + 9 * n);
  }
  for (std::size_t d : {0, 1, 32, 100}) {
    CHECK(encode_hidden(0, std::vector<float>(d, 0.5f)).payload.size() == 1 + 4 * d);
  }
  CHECK(encode_boxes(random_boxes(rng, 20, 4096)).payload.size() - 1 == 180);
  CHECK(encode_hidden(0, std::vector<float>(32)).payload.size() - 1 == 128);
}

TEST_CASE("fixed-point coordinates") {
  for (std::uint32_t v = 0; v <= 0xffff; ++v) {
    const auto u = static_cast<std::uint16_t>(v);
    REQUIRE(encode_coord(decode_coord(u, 4096), 4096) == u);
  }
  CHECK(code_of([] { encode_coord(4096.5, 4096); }) == ErrorCode::kOutOfRange);
  CHECK(code_of([] { encode_coord(-0.1, 4096); }) == ErrorCode::kOutOfRange);
}

TEST_CASE("round trips over random messages") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> count(0, 40);
  std::uniform_int_distribution<std::uint32_t> bits;
  const double extent = 4096;
  const double half_step = extent / 65535 / 2;
  for (int k = 0; k < 10000; ++k) {
    if (k % 2 == 0) {
      const BoxSet boxes = random_boxes(rng, count(rng), extent);
      BoxSet back;
      try {
        back = decode_boxes(parse_frame(serialize(encode_boxes(boxes, extent))), extent);
      } catch (const Error&) {
        // A box thinner than one quantization step is not representable.
        continue;
      }
      REQUIRE(back.ids() == boxes.ids());
      for (std::size_t b = 0; b < boxes.size(); ++b) {
        const auto& x = boxes.boxes()[b];
        const auto& y = back.boxes()[b];
        CHECK(std::abs(x.x_min() - y.x_min()) <= half_step + 1e-9);
        CHECK(std::abs(x.y_min() - y.y_min()) <= half_step + 1e-9);
        CHECK(std::abs(x.x_max() - y.x_max()) <= half_step + 1e-9);
        CHECK(std::abs(x.y_max() - y.y_max()) <= half_step + 1e-9);
      }
    } else {
      std::vector<float> v(count(rng));
      for (auto& f : v) f = std::bit_cast<float>(bits(rng));  // any bit pattern, NaNs and subnormals included
      const auto round = static_cast<std::uint8_t>(k & 0xff);
      const HiddenState back = decode_hidden(parse_frame(serialize(encode_hidden(round, v))));
      REQUIRE(back.round == round);
      REQUIRE(back.values.size() == v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(std::bit_cast<std::uint32_t>(back.values[i]) == std::bit_cast<std::uint32_t>(v[i]));
      }
    }
  }
  const std::vector<float> zeros(32, 0.0f), subnormal{std::numeric_limits<float>::denorm_min(), -0.0f};
  CHECK(decode_hidden(encode_hidden(1, zeros)).values == zeros);
  const auto sub = decode_hidden(encode_hidden(1, subnormal)).values;
  CHECK(std::bit_cast<std::uint32_t>(sub[0]) == 1u);
  CHECK(std::bit_cast<std::uint32_t>(sub[1]) == 0x80000000u);
  for (int a = 0; a < 256; a += 17) {
    for (int g = 0; g < 256; g += 13) {
      const GoalClaim c{std::uint8_t(a), std::uint8_t(g)};
      CHECK(decode_goal_claim(parse_frame(serialize(encode_goal_claim(c)))) == c);
    }
  }
}

TEST_CASE("encoder limits") {
  std::mt19937_64 rng(2);
  CHECK(code_of([&] { encode_boxes(random_boxes(rng, 256, 4096)); }) == ErrorCode::kTooMany);
  CHECK(code_of([] { encode_boxes(BoxSet({BoundingBox(0, 0, 1, 1)}, {300})); }) == ErrorCode::kOutOfRange);
  CHECK(code_of([] { encode_boxes(BoxSet({BoundingBox(0, 0, 5000, 1)}, {1})); }) == ErrorCode::kOutOfRange);
  CHECK(code_of([] { encode_hidden(0, std::vector<float>(16384)); }) == ErrorCode::kTooLarge);
}

TEST_CASE("malformed input") {
  const Bytes good = serialize(encode_boxes(BoxSet({BoundingBox(1, 1, 2, 2), BoundingBox(3, 3, 4, 4)}, {1, 2})));
  CHECK(code_of([&] { parse_frame(Bytes(good.begin(), good.end() - 1)); }) == ErrorCode::kMalformed);
  CHECK(code_of([] { parse_frame(Bytes{0x01, 0x00}); }) == ErrorCode::kMalformed);
  CHECK(code_of([] { parse_frame(Bytes{0x09, 0x00, 0x00}); }) == ErrorCode::kMalformed);

  // Count byte 2 but only one record.
  Message m{Kind::kBoxAnnounce, {0x02, 0x01, 0, 0, 0, 0, 0xff, 0xff, 0xff, 0xff}};
  CHECK(code_of([&] { decode_boxes(m); }) == ErrorCode::kMalformed);
  CHECK(code_of([&] { decode_boxes(Message{Kind::kBoxAnnounce, {}}); }) == ErrorCode::kMalformed);
  CHECK(code_of([&] { decode_hidden(Message{Kind::kHiddenState, {0, 1, 2}}); }) == ErrorCode::kMalformed);
  CHECK(code_of([&] { decode_goal_claim(Message{Kind::kHiddenState, {0, 1}}); }) == ErrorCode::kMalformed);
}

TEST_CASE("length-field corruption never yields a silently different message") {
  const std::vector<Bytes> frames{
      serialize(encode_boxes(BoxSet({BoundingBox(1, 1, 2, 2)}, {4}))),
      serialize(encode_hidden(1, std::vector<float>(32, 0.25f))),
      serialize(encode_goal_claim({1, 2}))};
  for (const auto& f : frames) {
    for (std::size_t pos : {1u, 2u}) {
      for (int v = 0; v < 256; ++v) {
        Bytes c = f;
        if (c[pos] == v) continue;
        c[pos] = static_cast<std::uint8_t>(v);
        CHECK(code_of([&] { parse_frame(c); }) == ErrorCode::kMalformed);
      }
    }
  }
}

TEST_CASE("bandwidth estimate") {
  const auto b = bandwidth_estimate(20, 32, 1e6);
  CHECK(b.bytes == 308);
  CHECK(b.latency_seconds == doctest::Approx(0.002464).epsilon(1e-12));
  CHECK(bandwidth_estimate(0, 32, 1e6).bytes == 128);
  CHECK(b.framing_overhead == 8);
  for (std::size_t n = 0; n <= 40; ++n) {
    for (std::size_t d : {8, 32, 64}) CHECK(bandwidth_estimate(n, d, 1e6).bytes == 4 * d + 9 * n);
  }
  CHECK_THROWS_AS(bandwidth_estimate(1, 1, 0), Error);
}
