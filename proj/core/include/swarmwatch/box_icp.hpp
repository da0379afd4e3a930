#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "swarmwatch/geometry.hpp"
#include "swarmwatch/lsa.hpp"

namespace swarmwatch {

/// Boxes observed by one agent together with the identity label of each box.
class BoxSet {
 public:
  BoxSet() = default;
  /// Throws InvalidArgument if sizes differ or ids repeat.
  BoxSet(std::vector<BoundingBox> boxes, std::vector<std::uint32_t> ids);

  /// Labels boxes 0..n-1.
  static BoxSet with_sequential_ids(std::vector<BoundingBox> boxes);

  std::size_t size() const noexcept { return boxes_.size(); }
  bool empty() const noexcept { return boxes_.empty(); }
  const std::vector<BoundingBox>& boxes() const noexcept { return boxes_; }
  const std::vector<std::uint32_t>& ids() const noexcept { return ids_; }

  std::vector<Quad> quads() const;

 private:
  std::vector<BoundingBox> boxes_;
  std::vector<std::uint32_t> ids_;
};

struct BoxPairCost {
  double cost = 0.0;
  /// corner k of the first box -> corner corner_match[k] of the second.
  std::array<std::size_t, 4> corner_match{};
};

/// Sum of corner distances under the optimal corner-to-corner assignment.
BoxPairCost box_pair_cost(const Quad& a, const Quad& b);

struct IcpOptions {
  double tol = 1e-6;
  std::size_t max_iter = 50;
  bool with_scale = true;
  /// 1 runs from the identity only. Larger values add starts that align the
  /// set centroids and pre-rotate set 1 by angles spread evenly over
  /// [-rotation_span, rotation_span]; the lowest final cost wins.
  std::size_t rotation_starts = 5;
  double rotation_span = std::numbers::pi / 4;
};

struct RegistrationResult {
  /// Maps set-1 image coordinates onto set-2 image coordinates.
  SimilarityTransform transform;
  /// set-1 box index -> set-2 box index.
  Assignment matching;
  bool converged = false;
  std::size_t iterations = 0;
  /// Mean matched corner distance after the last update, pixels.
  double final_cost = 0.0;
  /// final_cost after each iteration.
  std::vector<double> cost_trace;
};

/// Iterative box-level registration. Each iteration matches corners within every
/// box pair, matches boxes on those costs, fits a similarity on the matched
/// corners and moves set 1. Stops when the full correspondence (boxes and corners)
/// repeats, when the cost decrease drops below tol, or after max_iter.
/// iterations and cost_trace describe the winning start.
/// Throws CountMismatch for unequal counts, DegenerateInput for fewer than 2 boxes.
RegistrationResult box_icp(std::span<const Quad> set1, std::span<const Quad> set2,
                           const IcpOptions& options = {});

RegistrationResult box_icp(const BoxSet& set1, const BoxSet& set2,
                           const IcpOptions& options = {});

struct RingRegistration {
  /// labels[k][b] is the id (from view 0's id space) given to box b of view k.
  std::vector<std::vector<std::uint32_t>> labels;
  bool consensus_ok = false;
  /// pairs[k] registers view k onto view (k + 1) % n; the last entry closes the ring.
  std::vector<RegistrationResult> pairs;
  /// Index into pairs of the least trustworthy link when consensus fails
  /// (highest final cost).
  std::optional<std::size_t> failing_pair;
};

/// Successive pairwise alignment around the ring; consensus holds when the
/// composed matchings return view 0 to itself. Registration errors are rethrown
/// as RegistrationFailed naming the pair.
RingRegistration ring_register(std::span<const BoxSet> views, const IcpOptions& options = {});

/// Ring-wide success (s_det^2 * s_reg)^n.
double success_model(double s_det, double s_reg, std::size_t n);

}  // namespace swarmwatch
