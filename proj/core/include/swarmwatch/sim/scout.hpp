#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "swarmwatch/geometry.hpp"
#include "swarmwatch/sim/scene.hpp"

namespace swarmwatch::sim {

/// Archimedean spiral r = spacing * phi / (2 pi), phi from 0 to 2 pi * turns,
/// points_per_turn samples per turn (both ends included).
std::vector<Point2> spiral_waypoints(Point2 center, double spacing, std::size_t turns,
                                     std::size_t points_per_turn);

/// True iff the share of positive frames reaches the threshold.
/// Throws EmptyBuffer on an empty buffer, InvalidArgument for a threshold outside (0, 1].
bool detection_trigger(std::span<const bool> buffer, double threshold = 0.8);

struct ScoutOptions {
  /// Spiral center in world pixels.
  Point2 start{1500.0, 500.0};
  double spacing = 250.0;
  std::size_t max_turns = 12;
  std::size_t points_per_turn = 64;
  /// Half width of the square camera footprint in world pixels.
  double footprint = 500.0;
  std::size_t buffer = 10;
  double threshold = 0.8;
  /// Per-whale detection probability while searching.
  double s_det = 0.9;
};

struct ScoutResult {
  bool triggered = false;
  /// Frames taken until the trigger fired (or the path ended).
  std::size_t frames = 0;
  Point2 position;
};

/// Flies the spiral, one frame per waypoint; a frame is positive when a detected
/// whale center lies in the footprint. The trigger is evaluated once the buffer
/// is full.
ScoutResult run_scout(const Scene& scene, const ScoutOptions& options, std::uint64_t seed);

}  // namespace swarmwatch::sim
