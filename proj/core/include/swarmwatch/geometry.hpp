#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace swarmwatch {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Axis-aligned detection box in image pixels. Construction enforces
/// x_min < x_max, y_min < y_max and finite coordinates.
class BoundingBox {
 public:
  BoundingBox(double x_min, double y_min, double x_max, double y_max);

  double x_min() const noexcept { return x_min_; }
  double y_min() const noexcept { return y_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_max() const noexcept { return y_max_; }
  double width() const noexcept { return x_max_ - x_min_; }
  double height() const noexcept { return y_max_ - y_min_; }
  Point2 center() const noexcept { return {(x_min_ + x_max_) / 2, (y_min_ + y_max_) / 2}; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x_min_, y_min_, x_max_, y_max_;
};

/// Four box vertices; after a transform these are general quadrilaterals.
using Quad = std::array<Point2, 4>;

/// Counter-clockwise (in y-up axes) from (x_min, y_min):
/// (x_min,y_min), (x_max,y_min), (x_max,y_max), (x_min,y_max).
Quad corners(const BoundingBox& box) noexcept;

/// Smallest axis-aligned box containing all points.
BoundingBox hull(std::span<const Point2> points);

/// Planar similarity p -> s * R(angle) * p + t.
class SimilarityTransform {
 public:
  SimilarityTransform() = default;
  SimilarityTransform(double angle, double tx, double ty, double scale = 1.0);

  static SimilarityTransform identity() { return {}; }

  double angle() const noexcept { return angle_; }
  double tx() const noexcept { return tx_; }
  double ty() const noexcept { return ty_; }
  double scale() const noexcept { return scale_; }

  /// 3x3 homogeneous matrix.
  Eigen::Matrix3d matrix() const;

  Point2 apply(Point2 p) const noexcept;

  /// Returns the inverse; compose(T, T.inverse()) is the identity.
  SimilarityTransform inverse() const;

  /// (a * b)(p) == a(b(p)).
  friend SimilarityTransform operator*(const SimilarityTransform& a,
                                       const SimilarityTransform& b);

 private:
  double angle_ = 0.0;
  double tx_ = 0.0;
  double ty_ = 0.0;
  double scale_ = 1.0;
};

inline Point2 apply_transform(const SimilarityTransform& t, Point2 p) noexcept {
  return t.apply(p);
}

Quad transform_quad(const SimilarityTransform& t, const Quad& quad) noexcept;

std::vector<Quad> transform_box_points(const SimilarityTransform& t,
                                       std::span<const BoundingBox> boxes);

/// Least-squares similarity minimizing sum |T p1_k - p2_k|^2 (closed-form 2D
/// Umeyama). With with_scale off the scale is pinned to 1.
/// Throws DegenerateInput for fewer than 2 points or coincident source points.
SimilarityTransform estimate_similarity(std::span<const Point2> source,
                                        std::span<const Point2> target,
                                        bool with_scale = true);

double distance(Point2 a, Point2 b) noexcept;

}  // namespace swarmwatch
