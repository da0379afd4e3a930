#include "swarmwatch/sim/scout.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "swarmwatch/error.hpp"
#include "swarmwatch/random.hpp"

namespace swarmwatch::sim {

std::vector<Point2> spiral_waypoints(Point2 center, double spacing, std::size_t turns,
                                     std::size_t points_per_turn) {
  if (!(spacing > 0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::kInvalidArgument, "spacing must be positive");
  }
  if (turns < 1 || points_per_turn < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one turn and one point per turn");
  }
  const std::size_t n = turns * points_per_turn;
  std::vector<Point2> out;
  out.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double turns_done = double(k) / double(points_per_turn);
    const double phi = 2.0 * std::numbers::pi * turns_done;
    const double r = spacing * turns_done;
    out.push_back({center.x + r * std::cos(phi), center.y + r * std::sin(phi)});
  }
  return out;
}

bool detection_trigger(std::span<const bool> buffer, double threshold) {
  if (buffer.empty()) throw Error(ErrorCode::kEmptyBuffer, "trigger buffer holds no frames");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1]");
  }
  std::size_t hits = 0;
  for (bool b : buffer) hits += b;
  return double(hits) >= threshold * double(buffer.size());
}

ScoutResult run_scout(const Scene& scene, const ScoutOptions& o, std::uint64_t seed) {
  if (o.buffer == 0) throw Error(ErrorCode::kEmptyBuffer, "trigger buffer length is zero");
  if (!(o.footprint > 0)) throw Error(ErrorCode::kInvalidArgument, "footprint must be positive");
  const auto path = spiral_waypoints(o.start, o.spacing, o.max_turns, o.points_per_turn);
  Rng rng = make_stream(seed, "scout");
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Order inside the window does not matter for the trigger, so a circular slot
  // array is enough.
  auto window = std::make_unique<bool[]>(o.buffer);
  std::size_t filled = 0;
  ScoutResult result;
  for (const Point2& p : path) {
    bool positive = false;
    for (const auto& w : scene.whales) {
      const bool seen = unit(rng) < o.s_det;
      const Point2 c = w.center();
      if (seen && std::abs(c.x - p.x) <= o.footprint && std::abs(c.y - p.y) <= o.footprint) {
        positive = true;
      }
    }
    window[result.frames % o.buffer] = positive;
    ++result.frames;
    filled = std::min(filled + 1, o.buffer);
    result.position = p;
    if (filled == o.buffer && detection_trigger({window.get(), filled}, o.threshold)) {
      result.triggered = true;
      break;
    }
  }
  return result;
}

}  // namespace swarmwatch::sim
