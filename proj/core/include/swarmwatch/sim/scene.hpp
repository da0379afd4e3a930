#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "swarmwatch/box_icp.hpp"
#include "swarmwatch/geometry.hpp"

namespace swarmwatch::sim {

/// Ground-truth whale boxes in world pixels; box i carries id i.
struct Scene {
  std::vector<BoundingBox> whales;
  double extent = 1000.0;

  Point2 center() const noexcept { return {extent / 2, extent / 2}; }
};

struct SceneOptions {
  std::size_t whales = 9;
  double extent = 1000.0;
  double min_box = 40.0;
  double max_box = 90.0;
  /// Minimum clearance between boxes.
  double min_gap = 20.0;
  /// Boxes stay inside [margin, 1 - margin] * extent.
  double margin = 0.1;
};

/// Non-overlapping boxes by rejection sampling on the "scene" stream.
/// Throws InvalidArgument if the boxes cannot be placed.
Scene generate_scene(const SceneOptions& options, std::uint64_t seed);

inline constexpr std::uint32_t kFalsePositiveIdBase = 1000;

struct SyntheticDetector {
  /// Probability that a scene box is detected.
  double s_det = 1.0;
  /// Each corner moves uniformly within +-jitter pixels (view frame).
  double jitter = 0.0;
  /// Horizontal shear x += shear * (y - y_c) about the view's scene centroid.
  double shear = 0.0;
  /// Expected spurious boxes per scene box.
  double false_positive_rate = 0.0;

  void validate() const;
};

struct AgentView {
  SimilarityTransform transform;
  BoxSet observed;
};

/// Keeps each box with probability s_det, maps its corners through the transform,
/// shears and jitters them, and re-boxes the result as an axis-aligned hull.
/// Ids are scene indices; spurious boxes get ids from kFalsePositiveIdBase.
AgentView render_view(const Scene& scene, const SimilarityTransform& transform,
                      const SyntheticDetector& detector, std::uint64_t seed,
                      std::uint64_t index = 0);

/// Similarity about `pivot`: rotate and scale around it, then shift by (tx, ty).
SimilarityTransform pose_about(Point2 pivot, double angle, double scale, double tx, double ty);

}  // namespace swarmwatch::sim
