#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>

#include "swarmwatch/box_icp.hpp"
#include "swarmwatch/sim/scene.hpp"

namespace swarmwatch::sim {

/// Relative pose and perturbation ranges for a pair of views of one scene.
struct PairRegime {
  double max_angle = std::numbers::pi / 4;
  /// Bound on the translation norm as a fraction of the scene extent.
  double max_translation = 0.2;
  double scale_min = 0.8;
  double scale_max = 1.25;
  /// Corner jitter bound as a fraction of the smallest box side.
  double jitter_fraction = 0.01;
  /// Each view gets a shear drawn from [-max_shear, max_shear].
  double max_shear = 0.1;
};

struct PairTrial {
  bool correct = false;
  bool converged = false;
  std::size_t iterations = 0;
  double final_cost = 0.0;
  SimilarityTransform truth;
  SimilarityTransform estimate;
};

/// Renders view 1 in world coordinates and view 2 under a random relative pose
/// (stream "pairs"), both perturbed, and checks Box-ICP's box matching against
/// the true ids.
PairTrial registration_trial(const Scene& scene, const PairRegime& regime,
                             const IcpOptions& icp, std::uint64_t seed, std::uint64_t index);

}  // namespace swarmwatch::sim
