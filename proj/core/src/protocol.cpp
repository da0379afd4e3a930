#include "swarmwatch/protocol.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "swarmwatch/error.hpp"

namespace swarmwatch::wire {

namespace {

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint16_t get_u16(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint16_t>(in[at] | (in[at + 1] << 8));
}

void put_f32(Bytes& out, float f) {
  const auto bits = std::bit_cast<std::uint32_t>(f);
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(bits >> shift));
}

float get_f32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t bits = 0;
  for (int k = 3; k >= 0; --k) bits = (bits << 8) | in[at + static_cast<std::size_t>(k)];
  return std::bit_cast<float>(bits);
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::kMalformed, what); }

void expect_kind(const Message& m, Kind kind) {
  if (m.kind != kind) malformed("unexpected message kind " + std::to_string(int(m.kind)));
}

bool payload_fits_kind(Kind kind, std::size_t size) {
  switch (kind) {
    case Kind::kBoxAnnounce: return size >= 1 && (size - 1) % kBoxRecordBytes == 0;
    case Kind::kHiddenState: return size >= 1 && (size - 1) % 4 == 0;
    case Kind::kGoalClaim: return size == 2;
  }
  return false;
}

}  // namespace

Bytes serialize(const Message& message) {
  if (message.payload.size() > 0xffff) {
    throw Error(ErrorCode::kTooLarge, "payload exceeds 65535 bytes");
  }
  Bytes out;
  out.reserve(kFrameHeaderBytes + message.payload.size());
  out.push_back(static_cast<std::uint8_t>(message.kind));
  put_u16(out, static_cast<std::uint16_t>(message.payload.size()));
  out.insert(out.end(), message.payload.begin(), message.payload.end());
  return out;
}

Message parse_frame(std::span<const std::uint8_t> frame) {
  if (frame.size() < kFrameHeaderBytes) malformed("frame shorter than its header");
  const auto kind = static_cast<Kind>(frame[0]);
  if (kind != Kind::kBoxAnnounce && kind != Kind::kHiddenState && kind != Kind::kGoalClaim) {
    malformed("unknown kind byte " + std::to_string(frame[0]));
  }
  const std::size_t length = get_u16(frame, 1);
  if (length != frame.size() - kFrameHeaderBytes) {
    malformed("declared payload length " + std::to_string(length) + " but " +
              std::to_string(frame.size() - kFrameHeaderBytes) + " bytes follow");
  }
  if (!payload_fits_kind(kind, length)) {
    malformed("payload length " + std::to_string(length) + " impossible for kind " +
              std::to_string(frame[0]));
  }
  return Message{kind, Bytes(frame.begin() + kFrameHeaderBytes, frame.end())};
}

std::uint16_t encode_coord(double pixels, double image_extent) {
  if (!(image_extent > 0.0)) throw Error(ErrorCode::kInvalidArgument, "image extent must be > 0");
  if (!(pixels >= 0.0 && pixels <= image_extent)) {
    throw Error(ErrorCode::kOutOfRange, "coordinate " + std::to_string(pixels) +
                                            " outside [0, " + std::to_string(image_extent) + "]");
  }
  return static_cast<std::uint16_t>(std::lround(pixels / image_extent * 65535.0));
}

double decode_coord(std::uint16_t value, double image_extent) noexcept {
  return static_cast<double>(value) * (image_extent / 65535.0);
}

Message encode_boxes(const BoxSet& boxes, double image_extent) {
  if (boxes.size() > kMaxBoxes) {
    throw Error(ErrorCode::kTooMany, std::to_string(boxes.size()) + " boxes; at most 255 fit");
  }
  Message m{Kind::kBoxAnnounce, {}};
  m.payload.reserve(1 + kBoxRecordBytes * boxes.size());
  m.payload.push_back(static_cast<std::uint8_t>(boxes.size()));
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    const auto id = boxes.ids()[k];
    if (id > 0xff) throw Error(ErrorCode::kOutOfRange, "box id " + std::to_string(id) + " > 255");
    const auto& b = boxes.boxes()[k];
    m.payload.push_back(static_cast<std::uint8_t>(id));
    for (double v : {b.x_min(), b.y_min(), b.x_max(), b.y_max()}) {
      put_u16(m.payload, encode_coord(v, image_extent));
    }
  }
  return m;
}

BoxSet decode_boxes(const Message& message, double image_extent) {
  expect_kind(message, Kind::kBoxAnnounce);
  const auto& p = message.payload;
  if (p.empty()) malformed("box announcement without count byte");
  const std::size_t count = p[0];
  if (p.size() != 1 + kBoxRecordBytes * count) {
    malformed("count byte says " + std::to_string(count) + " boxes but payload holds " +
              std::to_string(p.size() - 1) + " record bytes");
  }
  std::vector<BoundingBox> boxes;
  std::vector<std::uint32_t> ids;
  boxes.reserve(count);
  ids.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t at = 1 + k * kBoxRecordBytes;
    ids.push_back(p[at]);
    const double x0 = decode_coord(get_u16(p, at + 1), image_extent);
    const double y0 = decode_coord(get_u16(p, at + 3), image_extent);
    const double x1 = decode_coord(get_u16(p, at + 5), image_extent);
    const double y1 = decode_coord(get_u16(p, at + 7), image_extent);
    try {
      boxes.emplace_back(x0, y0, x1, y1);
    } catch (const Error&) {
      malformed("record " + std::to_string(k) + " is not a valid box");
    }
  }
  try {
    return BoxSet(std::move(boxes), std::move(ids));
  } catch (const Error&) {
    malformed("duplicate box ids");
  }
}

Message encode_hidden(std::uint8_t round, std::span<const float> values) {
  if (values.size() > kMaxHiddenWidth) {
    throw Error(ErrorCode::kTooLarge, "hidden width " + std::to_string(values.size()) + " > 16383");
  }
  Message m{Kind::kHiddenState, {}};
  m.payload.reserve(1 + 4 * values.size());
  m.payload.push_back(round);
  for (float f : values) put_f32(m.payload, f);
  return m;
}

HiddenState decode_hidden(const Message& message) {
  expect_kind(message, Kind::kHiddenState);
  const auto& p = message.payload;
  if (p.empty() || (p.size() - 1) % 4 != 0) {
    malformed("hidden-state payload of " + std::to_string(p.size()) + " bytes");
  }
  HiddenState h;
  h.round = p[0];
  h.values.reserve((p.size() - 1) / 4);
  for (std::size_t at = 1; at < p.size(); at += 4) h.values.push_back(get_f32(p, at));
  return h;
}

Message encode_goal_claim(GoalClaim claim) {
  return Message{Kind::kGoalClaim, {claim.agent, claim.goal}};
}

GoalClaim decode_goal_claim(const Message& message) {
  expect_kind(message, Kind::kGoalClaim);
  if (message.payload.size() != 2) malformed("goal claim payload must be 2 bytes");
  return {message.payload[0], message.payload[1]};
}

BandwidthEstimate bandwidth_estimate(std::size_t num_boxes, std::size_t hidden_width,
                                     double link_bits_per_second) {
  if (!(link_bits_per_second > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "link rate must be positive");
  }
  BandwidthEstimate e;
  e.bytes = 4 * hidden_width + kBoxRecordBytes * num_boxes;
  // One box frame (header + count byte) and one hidden frame (header + round byte).
  e.framing_overhead = 2 * kFrameHeaderBytes + 2;
  e.latency_seconds = 8.0 * static_cast<double>(e.bytes) / link_bits_per_second;
  return e;
}

}  // namespace swarmwatch::wire
