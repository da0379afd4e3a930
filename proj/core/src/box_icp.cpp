#include "swarmwatch/box_icp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "swarmwatch/error.hpp"

namespace swarmwatch {

BoxSet::BoxSet(std::vector<BoundingBox> boxes, std::vector<std::uint32_t> ids)
    : boxes_(std::move(boxes)), ids_(std::move(ids)) {
  if (boxes_.size() != ids_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "box and id lists differ in length");
  }
  std::set<std::uint32_t> seen(ids_.begin(), ids_.end());
  if (seen.size() != ids_.size()) throw Error(ErrorCode::kInvalidArgument, "duplicate box id");
}

BoxSet BoxSet::with_sequential_ids(std::vector<BoundingBox> boxes) {
  std::vector<std::uint32_t> ids(boxes.size());
  for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = static_cast<std::uint32_t>(k);
  return BoxSet(std::move(boxes), std::move(ids));
}

std::vector<Quad> BoxSet::quads() const {
  std::vector<Quad> out;
  out.reserve(boxes_.size());
  for (const auto& b : boxes_) out.push_back(corners(b));
  return out;
}

BoxPairCost box_pair_cost(const Quad& a, const Quad& b) {
  CostMatrix d(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) d(i, j) = distance(a[i], b[j]);
  }
  const LsaResult r = solve_lsa(d);
  BoxPairCost out;
  out.cost = r.total_cost;
  std::copy(r.assignment.begin(), r.assignment.end(), out.corner_match.begin());
  return out;
}

namespace {

struct Correspondence {
  Assignment boxes;
  std::vector<std::array<std::size_t, 4>> corners;

  friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

RegistrationResult icp_from(std::span<const Quad> set1, std::span<const Quad> set2,
                            const SimilarityTransform& initial, const IcpOptions& options) {
  const std::size_t n = set1.size();
  std::vector<Quad> moved;
  moved.reserve(n);
  for (const auto& q : set1) moved.push_back(transform_quad(initial, q));
  RegistrationResult result;
  result.transform = initial;
  std::optional<Correspondence> previous;
  std::vector<BoxPairCost> pair_costs(n * n);
  std::vector<Point2> p1, p2;
  p1.reserve(4 * n);
  p2.reserve(4 * n);

  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    CostMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        pair_costs[i * n + j] = box_pair_cost(moved[i], set2[j]);
        c(i, j) = pair_costs[i * n + j].cost;
      }
    }
    Correspondence corr{solve_lsa(c).assignment, {}};
    corr.corners.reserve(n);

    p1.clear();
    p2.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = corr.boxes[i];
      const auto& match = pair_costs[i * n + j].corner_match;
      corr.corners.push_back(match);
      for (std::size_t k = 0; k < 4; ++k) {
        p1.push_back(moved[i][k]);
        p2.push_back(set2[j][match[k]]);
      }
    }

    const SimilarityTransform step = estimate_similarity(p1, p2, options.with_scale);
    result.transform = step * result.transform;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      moved[i] = transform_quad(step, moved[i]);
      const auto& match = corr.corners[i];
      for (std::size_t k = 0; k < 4; ++k) total += distance(moved[i][k], set2[corr.boxes[i]][match[k]]);
    }
    const double cost = total / static_cast<double>(4 * n);

    result.iterations = iter;
    result.matching = corr.boxes;
    const bool repeated = previous && *previous == corr;
    const bool stalled = !result.cost_trace.empty() && result.cost_trace.back() - cost < options.tol;
    result.cost_trace.push_back(cost);
    result.final_cost = cost;
    if (repeated || stalled) {
      result.converged = true;
      break;
    }
    previous = std::move(corr);
  }
  return result;
}

Point2 centroid(std::span<const Quad> set) {
  Point2 c;
  for (const auto& q : set) {
    for (const auto& p : q) {
      c.x += p.x;
      c.y += p.y;
    }
  }
  const double m = 4.0 * static_cast<double>(set.size());
  return {c.x / m, c.y / m};
}

}  // namespace

RegistrationResult box_icp(std::span<const Quad> set1, std::span<const Quad> set2,
                           const IcpOptions& options) {
  if (set1.size() != set2.size()) {
    throw Error(ErrorCode::kCountMismatch, std::to_string(set1.size()) + " vs " +
                                               std::to_string(set2.size()) + " boxes");
  }
  if (set1.size() < 2) {
    throw Error(ErrorCode::kDegenerateInput, "registration needs at least 2 boxes per set");
  }
  if (!(options.tol > 0.0) || options.max_iter == 0 || options.rotation_starts == 0 ||
      !(options.rotation_span >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "tol must be > 0, max_iter and rotation_starts >= 1, rotation_span >= 0");
  }

  RegistrationResult best = icp_from(set1, set2, SimilarityTransform::identity(), options);
  if (options.rotation_starts == 1) return best;

  const Point2 c1 = centroid(set1), c2 = centroid(set2);
  const std::size_t k = options.rotation_starts;
  for (std::size_t s = 0; s < k; ++s) {
    const double angle = -options.rotation_span + 2.0 * options.rotation_span * double(s) / double(k - 1);
    const SimilarityTransform spin(angle, 0.0, 0.0);
    const Point2 spun = spin.apply(c1);
    const SimilarityTransform start(angle, c2.x - spun.x, c2.y - spun.y);
    RegistrationResult r = icp_from(set1, set2, start, options);
    if (r.final_cost < best.final_cost - 1e-9 * (1.0 + best.final_cost)) best = std::move(r);
  }
  return best;
}

RegistrationResult box_icp(const BoxSet& set1, const BoxSet& set2, const IcpOptions& options) {
  const auto q1 = set1.quads();
  const auto q2 = set2.quads();
  return box_icp(q1, q2, options);
}

RingRegistration ring_register(std::span<const BoxSet> views, const IcpOptions& options) {
  if (views.size() < 2) throw Error(ErrorCode::kInvalidArgument, "ring needs at least 2 views");
  const std::size_t n = views.size();
  RingRegistration out;
  out.labels.resize(n);
  out.labels[0] = views[0].ids();

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t next = (k + 1) % n;
    try {
      out.pairs.push_back(box_icp(views[k], views[next], options));
    } catch (const Error& e) {
      throw Error(ErrorCode::kRegistrationFailed,
                  "pair " + std::to_string(k) + "->" + std::to_string(next) + ": " + e.what());
    }
    if (next == 0) break;
    const auto& matching = out.pairs.back().matching;
    out.labels[next].assign(views[next].size(), 0);
    for (std::size_t b = 0; b < matching.size(); ++b) out.labels[next][matching[b]] = out.labels[k][b];
  }

  // Closing link: view n-1's labels carried into view 0 must reproduce view 0's own.
  const auto& closing = out.pairs.back().matching;
  out.consensus_ok = true;
  for (std::size_t b = 0; b < closing.size(); ++b) {
    if (out.labels[n - 1][b] != out.labels[0][closing[b]]) {
      out.consensus_ok = false;
      break;
    }
  }
  if (!out.consensus_ok) {
    const auto worst = std::max_element(out.pairs.begin(), out.pairs.end(),
                                        [](const auto& a, const auto& b) {
                                          return a.final_cost < b.final_cost;
                                        });
    out.failing_pair = static_cast<std::size_t>(worst - out.pairs.begin());
  }
  return out;
}

double success_model(double s_det, double s_reg, std::size_t n) {
  if (!(s_det >= 0.0 && s_det <= 1.0) || !(s_reg >= 0.0 && s_reg <= 1.0) || n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "probabilities must lie in [0,1] and n >= 1");
  }
  const double pairwise = s_det * s_det * s_reg;
  return std::pow(pairwise, static_cast<double>(n));
}

}  // namespace swarmwatch
