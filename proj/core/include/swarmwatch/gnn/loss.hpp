#pragma once

#include <Eigen/Core>

namespace swarmwatch::gnn {

inline constexpr double kLossEpsilon = 1e-8;
inline constexpr double kDefaultAlpha = 0.5;

/// How the expectation in the cross-entropy term is taken.
enum class CeReduction {
  /// Mean over all n_a * n_g entries.
  kMeanEntries,
  /// Sum over the entries of one assignment matrix (expectation over graphs).
  kSumEntries,
};

// All losses take a matrix with one row per agent and one column per goal. When
// `grad` is non-null the gradient with respect to that matrix is written there.

/// ||1 - column sums||_2 + ||(1 - ||row_i||_2)_i||_2. Zero for a permutation matrix.
double loss_validity(const Eigen::MatrixXd& assignment, Eigen::MatrixXd* grad = nullptr);

/// Sum over agent pairs of row cosine similarity, norms clamped below by eps.
double loss_diversity(const Eigen::MatrixXd& soft, double eps = kLossEpsilon,
                      Eigen::MatrixXd* grad = nullptr);

/// Weighted binary cross-entropy: -0.9 E[Y log(A + eps)] - 0.1 E[(1 - Y) log(1 - A + eps)].
double loss_ce(const Eigen::MatrixXd& soft, const Eigen::MatrixXd& labels,
               double eps = kLossEpsilon, CeReduction reduction = CeReduction::kMeanEntries,
               Eigen::MatrixXd* grad = nullptr);

/// Reported blend: alpha (L_validity(hard) + L_div(soft)) + (1 - alpha) L_CE(soft).
double loss_total(const Eigen::MatrixXd& soft, const Eigen::MatrixXd& hard,
                  const Eigen::MatrixXd& labels, double alpha = kDefaultAlpha,
                  double eps = kLossEpsilon, CeReduction reduction = CeReduction::kMeanEntries);

struct ObjectiveOptions {
  double alpha = kDefaultAlpha;
  double eps = kLossEpsilon;
  CeReduction reduction = CeReduction::kSumEntries;
};

/// Differentiable training objective: the blend with validity evaluated on the soft matrix.
double training_objective(const Eigen::MatrixXd& soft, const Eigen::MatrixXd& labels,
                          const ObjectiveOptions& options, Eigen::MatrixXd* grad = nullptr);

/// Row-wise argmax one-hot (ties to the lowest column).
Eigen::MatrixXd harden(const Eigen::MatrixXd& soft);

}  // namespace swarmwatch::gnn
