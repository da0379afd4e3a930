#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "swarmwatch/error.hpp"
#include "swarmwatch/geometry.hpp"

using namespace swarmwatch;
using std::numbers::pi;

namespace {

void check_point(Point2 p, double x, double y, double tol = 1e-12) {
  CHECK(std::abs(p.x - x) <= tol);
  CHECK(std::abs(p.y - y) <= tol);
}

Eigen::Matrix3d hand_matrix(double th, double tx, double ty, double s) {
  Eigen::Matrix3d m;
  m << s * std::cos(th), -s * std::sin(th), tx,
       s * std::sin(th), s * std::cos(th), ty,
       0, 0, 1;
  return m;
}

}  // namespace

TEST_CASE("box validation") {
  CHECK_NOTHROW(BoundingBox(0, 0, 1, 1));
  for (auto bad : {std::array<double, 4>{1.0, 0.0, 1.0, 1.0}, std::array<double, 4>{0.0, 2.0, 1.0, 1.0},
                   std::array<double, 4>{0.0, 0.0, NAN, 1.0}, std::array<double, 4>{0.0, 0.0, 1.0, INFINITY}}) {
    try {
      BoundingBox(bad[0], bad[1], bad[2], bad[3]);
      FAIL("accepted an invalid box");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidBox);
    }
  }
}

TEST_CASE("corner order") {
  const Quad a = corners(BoundingBox(0, 0, 1, 1));
  CHECK(a == Quad{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}});
  const Quad b = corners(BoundingBox(2, 3, 5, 7));
  CHECK(b == Quad{{{2, 3}, {5, 3}, {5, 7}, {2, 7}}});
  const Quad c = corners(BoundingBox(-1, -1, 1, 1));
  CHECK(c == Quad{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}});
}

TEST_CASE("hull of transformed corners") {
  const std::array<Point2, 3> pts{{{1, 5}, {-2, 3}, {4, -1}}};
  const BoundingBox h = hull(pts);
  CHECK(h == BoundingBox(-2, -1, 4, 5));
}

TEST_CASE("apply transform") {
  check_point(SimilarityTransform::identity().apply({3, 4}), 3, 4);
  check_point(SimilarityTransform(0, 10, 5).apply({0, 0}), 10, 5);
  check_point(SimilarityTransform(pi / 2, 0, 0).apply({1, 0}), 0, 1, 1e-15);
}

TEST_CASE("transform_box_points") {
  const std::array<BoundingBox, 1> unit{BoundingBox(0, 0, 1, 1)};
  const auto moved = transform_box_points(SimilarityTransform(0, 1, 0), unit);
  CHECK(moved[0] == Quad{{{1, 0}, {2, 0}, {2, 1}, {1, 1}}});
  const auto turned = transform_box_points(SimilarityTransform(pi / 2, 0, 0), unit);
  const Quad expected{{{0, 0}, {0, 1}, {-1, 1}, {-1, 0}}};
  for (std::size_t k = 0; k < 4; ++k) check_point(turned[0][k], expected[k].x, expected[k].y, 1e-15);
}

TEST_CASE("matrix, inverse and composition agree with hand-built matrices") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(-4, 4), t(-100, 100), s(0.2, 3);
  for (int k = 0; k < 200; ++k) {
    const double a1 = ang(rng), x1 = t(rng), y1 = t(rng), s1 = s(rng);
    const double a2 = ang(rng), x2 = t(rng), y2 = t(rng), s2 = s(rng);
    const SimilarityTransform A(a1, x1, y1, s1), B(a2, x2, y2, s2);
    const Eigen::Matrix3d MA = hand_matrix(a1, x1, y1, s1), MB = hand_matrix(a2, x2, y2, s2);
    CHECK((A.matrix() - MA).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(((A * B).matrix() - MA * MB).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(((A * A.inverse()).matrix() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(A.angle()) <= pi + 1e-12);
  }
}

TEST_CASE("invalid transforms are rejected") {
  CHECK_THROWS_AS(SimilarityTransform(0, 0, 0, 0.0), Error);
  CHECK_THROWS_AS(SimilarityTransform(0, 0, 0, -1.0), Error);
  CHECK_THROWS_AS(SimilarityTransform(NAN, 0, 0), Error);
}

TEST_CASE("estimate_similarity recovers constructed transforms") {
  const std::vector<Point2> p1{{0, 0}, {4, 1}, {2, 5}, {-3, 2}};
  SUBCASE("identity") {
    const auto t = estimate_similarity(p1, p1);
    CHECK((t.matrix() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("translation") {
    std::vector<Point2> p2;
    for (auto p : p1) p2.push_back({p.x + 10, p.y + 5});
    const auto t = estimate_similarity(p1, p2);
    CHECK(std::abs(t.angle()) < 1e-12);
    CHECK(std::abs(t.scale() - 1) < 1e-12);
    CHECK(std::abs(t.tx() - 10) < 1e-9);
    CHECK(std::abs(t.ty() - 5) < 1e-9);
  }
  SUBCASE("rotation and scale") {
    const SimilarityTransform truth(pi / 6, 0, 0, 2);
    std::vector<Point2> p2;
    for (auto p : p1) p2.push_back(truth.apply(p));
    const auto t = estimate_similarity(p1, p2);
    CHECK(std::abs(t.angle() - pi / 6) < 1e-6);
    CHECK(std::abs(t.scale() - 2) < 1e-6);
  }
  SUBCASE("without scale the scale stays 1") {
    const SimilarityTransform truth(0.4, 3, -2, 1.7);
    std::vector<Point2> p2;
    for (auto p : p1) p2.push_back(truth.apply(p));
    CHECK(estimate_similarity(p1, p2, false).scale() == 1.0);
  }
}

TEST_CASE("estimate_similarity matches Eigen's Umeyama on noisy data") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0, 2);
  std::uniform_real_distribution<double> u(-300, 300);
  for (int trial = 0; trial < 50; ++trial) {
    const SimilarityTransform truth(u(rng) / 100, u(rng), u(rng), 0.8 + std::abs(u(rng)) / 600);
    const int n = 12;
    std::vector<Point2> p1, p2;
    Eigen::Matrix2Xd src(2, n), dst(2, n);
    for (int k = 0; k < n; ++k) {
      const Point2 a{u(rng), u(rng)};
      Point2 b = truth.apply(a);
      b.x += noise(rng);
      b.y += noise(rng);
      p1.push_back(a);
      p2.push_back(b);
      src.col(k) << a.x, a.y;
      dst.col(k) << b.x, b.y;
    }
    const Eigen::Matrix3d oracle = Eigen::umeyama(src, dst, true);
    CHECK((estimate_similarity(p1, p2).matrix() - oracle).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::Matrix3d rigid = Eigen::umeyama(src, dst, false);
    CHECK((estimate_similarity(p1, p2, false).matrix() - rigid).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("estimate_similarity degenerate input") {
  const std::vector<Point2> one{{1, 1}};
  const std::vector<Point2> same{{1, 1}, {1, 1}, {1, 1}};
  const std::vector<Point2> other{{0, 0}, {2, 0}, {4, 4}};
  for (const auto* src : {&one, &same}) {
    try {
      estimate_similarity(*src, std::span(other).first(src->size()));
      FAIL("accepted degenerate input");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDegenerateInput);
    }
  }
}
