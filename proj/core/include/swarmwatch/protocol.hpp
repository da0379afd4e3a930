#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "swarmwatch/box_icp.hpp"

namespace swarmwatch::wire {

using Bytes = std::vector<std::uint8_t>;

enum class Kind : std::uint8_t {
  kBoxAnnounce = 0x01,
  kHiddenState = 0x02,
  kGoalClaim = 0x03,
};

/// kind (1 byte) + payload length (2 bytes, little-endian).
inline constexpr std::size_t kFrameHeaderBytes = 3;
inline constexpr std::size_t kBoxRecordBytes = 9;
inline constexpr std::size_t kMaxBoxes = 255;
inline constexpr std::size_t kMaxHiddenWidth = 16383;
inline constexpr double kDefaultImageExtent = 4096.0;

struct Message {
  Kind kind;
  Bytes payload;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Frame layout: [kind][len lo][len hi][payload...].
Bytes serialize(const Message& message);

/// Parses exactly one frame occupying all of `frame`. Throws Malformed for an
/// unknown kind, a length that disagrees with the buffer, or a payload whose
/// size is impossible for its kind.
Message parse_frame(std::span<const std::uint8_t> frame);

// Box announcements: count byte, then per box an id byte and x_min, y_min,
// x_max, y_max as unsigned 16-bit fixed point over [0, image_extent].

std::uint16_t encode_coord(double pixels, double image_extent);
double decode_coord(std::uint16_t value, double image_extent) noexcept;

Message encode_boxes(const BoxSet& boxes, double image_extent = kDefaultImageExtent);
BoxSet decode_boxes(const Message& message, double image_extent = kDefaultImageExtent);

struct HiddenState {
  std::uint8_t round = 0;
  std::vector<float> values;

  friend bool operator==(const HiddenState&, const HiddenState&) = default;
};

/// Round byte, then d_h little-endian IEEE-754 binary32 values.
Message encode_hidden(std::uint8_t round, std::span<const float> values);
HiddenState decode_hidden(const Message& message);

struct GoalClaim {
  std::uint8_t agent = 0;
  std::uint8_t goal = 0;

  friend bool operator==(const GoalClaim&, const GoalClaim&) = default;
};

Message encode_goal_claim(GoalClaim claim);
GoalClaim decode_goal_claim(const Message& message);

struct BandwidthEstimate {
  /// Payload bodies only: 4 * d_h + 9 * N_w.
  std::size_t bytes = 0;
  /// Frame headers plus the box count byte and hidden-state round byte.
  std::size_t framing_overhead = 0;
  double latency_seconds = 0.0;
};

BandwidthEstimate bandwidth_estimate(std::size_t num_boxes, std::size_t hidden_width,
                                     double link_bits_per_second);

}  // namespace swarmwatch::wire
