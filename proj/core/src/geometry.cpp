#include "swarmwatch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "swarmwatch/error.hpp"

namespace swarmwatch {

BoundingBox::BoundingBox(double x_min, double y_min, double x_max, double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  const bool finite = std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
                      std::isfinite(y_max);
  if (!finite || !(x_min < x_max) || !(y_min < y_max)) {
    throw Error(ErrorCode::kInvalidBox,
                "box (" + std::to_string(x_min) + ", " + std::to_string(y_min) + ", " +
                    std::to_string(x_max) + ", " + std::to_string(y_max) + ")");
  }
}

Quad corners(const BoundingBox& box) noexcept {
  return {Point2{box.x_min(), box.y_min()}, Point2{box.x_max(), box.y_min()},
          Point2{box.x_max(), box.y_max()}, Point2{box.x_min(), box.y_max()}};
}

BoundingBox hull(std::span<const Point2> points) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "hull of empty point set");
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& p : points) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  return BoundingBox(x0, y0, x1, y1);
}

SimilarityTransform::SimilarityTransform(double angle, double tx, double ty, double scale)
    : angle_(std::remainder(angle, 2.0 * std::numbers::pi)), tx_(tx), ty_(ty), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(angle) || !std::isfinite(tx) ||
      !std::isfinite(ty)) {
    throw Error(ErrorCode::kInvalidArgument, "similarity transform needs finite values, scale > 0");
  }
}

Eigen::Matrix3d SimilarityTransform::matrix() const {
  const double c = scale_ * std::cos(angle_);
  const double s = scale_ * std::sin(angle_);
  Eigen::Matrix3d m;
  m << c, -s, tx_,
       s, c, ty_,
       0, 0, 1;
  return m;
}

Point2 SimilarityTransform::apply(Point2 p) const noexcept {
  const double c = scale_ * std::cos(angle_);
  const double s = scale_ * std::sin(angle_);
  return {c * p.x - s * p.y + tx_, s * p.x + c * p.y + ty_};
}

SimilarityTransform SimilarityTransform::inverse() const {
  // p = R^T (q - t) / s
  const double inv_s = 1.0 / scale_;
  const double c = std::cos(angle_) * inv_s;
  const double s = std::sin(angle_) * inv_s;
  return SimilarityTransform(-angle_, -(c * tx_ + s * ty_), -(-s * tx_ + c * ty_), inv_s);
}

SimilarityTransform operator*(const SimilarityTransform& a, const SimilarityTransform& b) {
  const Point2 t = a.apply({b.tx(), b.ty()});
  return SimilarityTransform(a.angle() + b.angle(), t.x, t.y, a.scale() * b.scale());
}

Quad transform_quad(const SimilarityTransform& t, const Quad& quad) noexcept {
  Quad out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = t.apply(quad[k]);
  return out;
}

std::vector<Quad> transform_box_points(const SimilarityTransform& t,
                                       std::span<const BoundingBox> boxes) {
  std::vector<Quad> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) out.push_back(transform_quad(t, corners(b)));
  return out;
}

SimilarityTransform estimate_similarity(std::span<const Point2> source,
                                        std::span<const Point2> target, bool with_scale) {
  if (source.size() != target.size()) {
    throw Error(ErrorCode::kInvalidArgument, "point sets differ in size");
  }
  if (source.size() < 2) {
    throw Error(ErrorCode::kDegenerateInput, "similarity needs at least 2 point pairs");
  }
  const double n = static_cast<double>(source.size());
  Point2 mu1, mu2;
  for (std::size_t k = 0; k < source.size(); ++k) {
    mu1.x += source[k].x;
    mu1.y += source[k].y;
    mu2.x += target[k].x;
    mu2.y += target[k].y;
  }
  mu1 = {mu1.x / n, mu1.y / n};
  mu2 = {mu2.x / n, mu2.y / n};

  double dot = 0.0, cross = 0.0, var = 0.0;
  for (std::size_t k = 0; k < source.size(); ++k) {
    const double ax = source[k].x - mu1.x, ay = source[k].y - mu1.y;
    const double bx = target[k].x - mu2.x, by = target[k].y - mu2.y;
    dot += ax * bx + ay * by;
    cross += ax * by - ay * bx;
    var += ax * ax + ay * ay;
  }
  // Relative to the coordinate magnitude so that large pixel offsets of a
  // single repeated point still count as coincident.
  const double magnitude = std::max({1.0, std::abs(mu1.x), std::abs(mu1.y)});
  if (var <= n * 1e-24 * magnitude * magnitude) {
    throw Error(ErrorCode::kDegenerateInput, "source points coincide; rotation undefined");
  }

  const double angle = std::atan2(cross, dot);
  double scale = 1.0;
  if (with_scale) {
    scale = std::hypot(dot, cross) / var;
    if (!(scale > 0.0)) {
      throw Error(ErrorCode::kDegenerateInput, "target points coincide; scale collapses to 0");
    }
  }
  const double c = scale * std::cos(angle), s = scale * std::sin(angle);
  return SimilarityTransform(angle, mu2.x - (c * mu1.x - s * mu1.y),
                             mu2.y - (s * mu1.x + c * mu1.y), scale);
}

double distance(Point2 a, Point2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace swarmwatch
