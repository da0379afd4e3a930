#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "swarmwatch/error.hpp"
#include "swarmwatch/gnn/loss.hpp"

using namespace swarmwatch;
using namespace swarmwatch::gnn;
using Eigen::MatrixXd;

namespace {

MatrixXd permutation(std::initializer_list<int> cols) {
  MatrixXd m = MatrixXd::Zero(Eigen::Index(cols.size()), Eigen::Index(cols.size()));
  int r = 0;
  for (int c : cols) m(r++, c) = 1.0;
  return m;
}

// Rows of a row-stochastic matrix with all entries strictly inside (0, 1).
MatrixXd random_soft(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

double max_fd_error(const std::function<double(const MatrixXd&, MatrixXd*)>& f, const MatrixXd& x) {
  MatrixXd grad;
  f(x, &grad);
  const double h = 1e-6;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    MatrixXd p = x, m = x;
    p(k) += h;
    m(k) -= h;
    const double fd = (f(p, nullptr) - f(m, nullptr)) / (2 * h);
    worst = std::max(worst, std::abs(fd - grad(k)) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

}  // namespace

TEST_CASE("validity") {
  CHECK(loss_validity(permutation({2, 0, 4, 1, 3})) == 0.0);
  // Two agents on goal 0 of two: column sums (2, 0), rows one-hot.
  MatrixXd clash{{1, 0}, {1, 0}};
  CHECK(loss_validity(clash) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // Uniform rows over 4 goals: row norm 1/2, column sums n_a / 4.
  const MatrixXd uniform = MatrixXd::Constant(3, 4, 0.25);
  const double col = std::sqrt(4 * std::pow(1 - 0.75, 2));
  const double row = std::sqrt(3 * std::pow(1 - 0.5, 2));
  CHECK(loss_validity(uniform) == doctest::Approx(col + row).epsilon(1e-15));
}

TEST_CASE("diversity") {
  CHECK(loss_diversity(permutation({1, 0, 2})) == 0.0);
  CHECK(loss_diversity(MatrixXd{{0, 1, 0}, {0, 1, 0}}) == doctest::Approx(1.0));
  CHECK(loss_diversity(MatrixXd::Constant(3, 4, 0.25)) == doctest::Approx(3.0));
  // Zero rows stay finite thanks to the clamp.
  CHECK(std::isfinite(loss_diversity(MatrixXd::Zero(3, 4))));
}

TEST_CASE("cross-entropy") {
  const MatrixXd y = permutation({3, 1, 0, 2});
  CHECK(loss_ce(y, y) <= 1e-6);

  // One-hot labels, uniform rows over 10 goals: per-entry hand evaluation.
  const Eigen::Index na = 5, ng = 10;
  MatrixXd labels = MatrixXd::Zero(na, ng);
  for (Eigen::Index i = 0; i < na; ++i) labels(i, i) = 1.0;
  const MatrixXd a = MatrixXd::Constant(na, ng, 0.1);
  const double eps = kLossEpsilon;
  const double expected = (-0.9 * na * std::log(0.1 + eps) - 0.1 * (na * ng - na) * std::log(0.9 + eps)) /
                          double(na * ng);
  CHECK(loss_ce(a, labels) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(loss_ce(a, labels, eps, CeReduction::kSumEntries) ==
        doctest::Approx(expected * na * ng).epsilon(1e-14));

  // A zero probability at a positive label is clamped, not infinite.
  MatrixXd miss = MatrixXd::Zero(2, 2);
  miss(0, 1) = miss(1, 0) = 1.0;
  const double v = loss_ce(miss, permutation({0, 1}));
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(-0.9 * 2 * std::log(eps) / 4 - 0.1 * 2 * std::log(eps) / 4));

  CHECK_THROWS_AS(loss_ce(MatrixXd::Zero(2, 3), MatrixXd::Zero(3, 2)), Error);
}

TEST_CASE("total blend") {
  const MatrixXd y = permutation({1, 2, 0});
  CHECK(loss_total(y, y, y) <= 1e-6);

  std::mt19937_64 rng(3);
  const MatrixXd a = random_soft(rng, 4, 6);
  const MatrixXd hard = harden(a);
  MatrixXd labels = MatrixXd::Zero(4, 6);
  for (Eigen::Index i = 0; i < 4; ++i) labels(i, i + 1) = 1.0;
  CHECK(loss_total(a, hard, labels, 0.0) == doctest::Approx(loss_ce(a, labels)));
  CHECK(loss_total(a, hard, labels, 1.0) ==
        doctest::Approx(loss_validity(hard) + loss_diversity(a)));
  CHECK(loss_total(a, hard, labels, 0.5) ==
        doctest::Approx(0.5 * (loss_validity(hard) + loss_diversity(a)) + 0.5 * loss_ce(a, labels)));
  CHECK_THROWS_AS(loss_total(a, hard, labels, 1.5), Error);
}

TEST_CASE("harden picks the row argmax, lowest index on ties") {
  const MatrixXd a{{0.2, 0.5, 0.3}, {0.4, 0.2, 0.4}};
  CHECK(harden(a) == MatrixXd{{0, 1, 0}, {1, 0, 0}});
  // Positive rescaling of scores leaves the hard assignment unchanged.
  CHECK(harden(3.7 * a) == harden(a));
}

TEST_CASE("analytic loss gradients match finite differences") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const MatrixXd a = random_soft(rng, 5, 7);
    MatrixXd labels = MatrixXd::Zero(5, 7);
    for (Eigen::Index i = 0; i < 5; ++i) labels(i, (i * 3) % 7) = 1.0;

    CHECK(max_fd_error([](const MatrixXd& x, MatrixXd* g) { return loss_validity(x, g); }, a) < 1e-6);
    CHECK(max_fd_error([](const MatrixXd& x, MatrixXd* g) { return loss_diversity(x, kLossEpsilon, g); },
                       a) < 1e-6);
    CHECK(max_fd_error(
              [&](const MatrixXd& x, MatrixXd* g) {
                return loss_ce(x, labels, kLossEpsilon, CeReduction::kMeanEntries, g);
              },
              a) < 1e-6);
    const ObjectiveOptions opts;
    CHECK(max_fd_error([&](const MatrixXd& x, MatrixXd* g) { return training_objective(x, labels, opts, g); },
                       a) < 1e-6);
  }
}

TEST_CASE("training objective evaluates validity on the soft matrix") {
  std::mt19937_64 rng(4);
  const MatrixXd a = random_soft(rng, 3, 5);
  MatrixXd labels = MatrixXd::Zero(3, 5);
  labels(0, 0) = labels(1, 2) = labels(2, 4) = 1.0;
  const ObjectiveOptions opts{0.5, kLossEpsilon, CeReduction::kSumEntries};
  CHECK(training_objective(a, labels, opts) ==
        doctest::Approx(0.5 * (loss_validity(a) + loss_diversity(a)) +
                        0.5 * loss_ce(a, labels, kLossEpsilon, CeReduction::kSumEntries)));
}
