#include "swarmwatch/sim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarmwatch/error.hpp"
#include "swarmwatch/random.hpp"

namespace swarmwatch::sim {

namespace {

bool clear_of(const BoundingBox& a, const BoundingBox& b, double gap) {
  return a.x_max() + gap <= b.x_min() || b.x_max() + gap <= a.x_min() ||
         a.y_max() + gap <= b.y_min() || b.y_max() + gap <= a.y_min();
}

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

Scene generate_scene(const SceneOptions& o, std::uint64_t seed) {
  if (o.whales == 0) throw Error(ErrorCode::kInvalidArgument, "scene needs at least one whale");
  if (!(o.extent > 0) || !(o.min_box > 0) || o.max_box < o.min_box || o.min_gap < 0 ||
      !(o.margin >= 0 && o.margin < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid scene options");
  }
  const double lo = o.margin * o.extent, hi = (1.0 - o.margin) * o.extent;
  if (hi - lo <= o.max_box) throw Error(ErrorCode::kInvalidArgument, "boxes do not fit the scene");

  Rng rng = make_stream(seed, "scene");
  std::uniform_real_distribution<double> size(o.min_box, o.max_box);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Scene scene;
  scene.extent = o.extent;
  std::size_t attempts = 0;
  while (scene.whales.size() < o.whales) {
    if (++attempts > 100000) {
      throw Error(ErrorCode::kInvalidArgument,
                  "could not place " + std::to_string(o.whales) + " non-overlapping boxes");
    }
    const double w = size(rng), h = size(rng);
    const double x = lo + unit(rng) * (hi - lo - w);
    const double y = lo + unit(rng) * (hi - lo - h);
    BoundingBox box(x, y, x + w, y + h);
    if (std::all_of(scene.whales.begin(), scene.whales.end(),
                    [&](const BoundingBox& b) { return clear_of(box, b, o.min_gap); })) {
      scene.whales.push_back(box);
    }
  }
  return scene;
}

void SyntheticDetector::validate() const {
  if (!in_unit(s_det)) throw Error(ErrorCode::kInvalidArgument, "s_det must lie in [0, 1]");
  if (!in_unit(false_positive_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "false_positive_rate must lie in [0, 1]");
  }
  if (!(jitter >= 0) || !std::isfinite(jitter)) {
    throw Error(ErrorCode::kInvalidArgument, "jitter must be a finite non-negative value");
  }
  if (!std::isfinite(shear)) throw Error(ErrorCode::kInvalidArgument, "shear must be finite");
}

SimilarityTransform pose_about(Point2 pivot, double angle, double scale, double tx, double ty) {
  const SimilarityTransform rs(angle, 0.0, 0.0, scale);
  const Point2 moved = rs.apply(pivot);
  return {angle, pivot.x - moved.x + tx, pivot.y - moved.y + ty, scale};
}

AgentView render_view(const Scene& scene, const SimilarityTransform& transform,
                      const SyntheticDetector& detector, std::uint64_t seed, std::uint64_t index) {
  detector.validate();
  Rng rng = make_stream(seed, "detector", index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Quad> quads;
  std::vector<std::uint32_t> ids;
  for (std::size_t i = 0; i < scene.whales.size(); ++i) {
    // Draw for every box so the keep pattern is independent of the other settings.
    const bool keep = unit(rng) < detector.s_det;
    if (keep) {
      quads.push_back(transform_quad(transform, corners(scene.whales[i])));
      ids.push_back(static_cast<std::uint32_t>(i));
    }
  }
  const std::size_t real = quads.size();
  if (detector.false_positive_rate > 0 && !scene.whales.empty()) {
    std::uint32_t next = kFalsePositiveIdBase;
    for (const auto& w : scene.whales) {
      if (unit(rng) >= detector.false_positive_rate) continue;
      const double x = unit(rng) * (scene.extent - w.width());
      const double y = unit(rng) * (scene.extent - w.height());
      quads.push_back(transform_quad(transform, corners(BoundingBox(x, y, x + w.width(), y + w.height()))));
      ids.push_back(next++);
    }
  }

  double yc = 0.0;
  for (std::size_t k = 0; k < real; ++k) {
    for (const auto& p : quads[k]) yc += p.y;
  }
  if (real > 0) yc /= double(4 * real);

  std::uniform_real_distribution<double> jitter(-detector.jitter, detector.jitter);
  std::vector<BoundingBox> boxes;
  boxes.reserve(quads.size());
  for (auto& q : quads) {
    for (auto& p : q) {
      p.x += detector.shear * (p.y - yc);
      if (detector.jitter > 0) {
        p.x += jitter(rng);
        p.y += jitter(rng);
      }
    }
    boxes.push_back(hull(q));
  }
  return {transform, BoxSet(std::move(boxes), std::move(ids))};
}

}  // namespace swarmwatch::sim
