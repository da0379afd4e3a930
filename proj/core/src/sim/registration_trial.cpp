#include "swarmwatch/sim/registration_trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "swarmwatch/random.hpp"

namespace swarmwatch::sim {

PairTrial registration_trial(const Scene& scene, const PairRegime& regime, const IcpOptions& icp,
                             std::uint64_t seed, std::uint64_t index) {
  Rng rng = make_stream(seed, "pairs", index);
  std::uniform_real_distribution<double> angle(-regime.max_angle, regime.max_angle);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> scale(regime.scale_min, regime.scale_max);
  std::uniform_real_distribution<double> shear(-regime.max_shear, regime.max_shear);

  const double th = angle(rng), s = scale(rng);
  // Uniform over the disk of allowed translations.
  const double radius = regime.max_translation * scene.extent * std::sqrt(unit(rng));
  const double heading = 2.0 * std::numbers::pi * unit(rng);
  const double tx = radius * std::cos(heading), ty = radius * std::sin(heading);
  PairTrial trial;
  trial.truth = pose_about(scene.center(), th, s, tx, ty);

  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& b : scene.whales) smallest = std::min({smallest, b.width(), b.height()});
  SyntheticDetector d1, d2;
  d1.shear = shear(rng);
  d2.shear = shear(rng);
  d1.jitter = regime.jitter_fraction * smallest;
  d2.jitter = regime.jitter_fraction * smallest * s;

  const AgentView v1 = render_view(scene, SimilarityTransform::identity(), d1, seed, 2 * index);
  const AgentView v2 = render_view(scene, trial.truth, d2, seed, 2 * index + 1);
  const RegistrationResult r = box_icp(v1.observed, v2.observed, icp);
  trial.estimate = r.transform;
  trial.converged = r.converged;
  trial.iterations = r.iterations;
  trial.final_cost = r.final_cost;
  trial.correct = true;
  for (std::size_t b = 0; b < r.matching.size(); ++b) {
    if (v1.observed.ids()[b] != v2.observed.ids()[r.matching[b]]) trial.correct = false;
  }
  return trial;
}

}  // namespace swarmwatch::sim
