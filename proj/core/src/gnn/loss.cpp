#include "swarmwatch/gnn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "swarmwatch/error.hpp"

namespace swarmwatch::gnn {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double loss_validity(const MatrixXd& a, MatrixXd* grad) {
  const VectorXd col_gap = VectorXd::Ones(a.cols()) - a.colwise().sum().transpose();
  const VectorXd row_norm = a.rowwise().norm();
  const VectorXd row_gap = VectorXd::Ones(a.rows()) - row_norm;
  const double col_term = col_gap.norm();
  const double row_term = row_gap.norm();
  if (grad != nullptr) {
    grad->setZero(a.rows(), a.cols());
    if (col_term > 0.0) grad->rowwise() -= (col_gap / col_term).transpose();
    if (row_term > 0.0) {
      for (Index i = 0; i < a.rows(); ++i) {
        if (row_norm(i) > 0.0) {
          grad->row(i) -= (row_gap(i) / row_term / row_norm(i)) * a.row(i);
        }
      }
    }
  }
  return col_term + row_term;
}

double loss_diversity(const MatrixXd& a, double eps, MatrixXd* grad) {
  const Index n = a.rows();
  const VectorXd norm = a.rowwise().norm();
  const VectorXd clamped = norm.cwiseMax(eps);
  const MatrixXd dots = a * a.transpose();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) total += dots(i, j) / (clamped(i) * clamped(j));
  }
  if (grad != nullptr) {
    grad->setZero(a.rows(), a.cols());
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double denom = clamped(i) * clamped(j);
        grad->row(i) += a.row(j) / denom;
        // d clamped_i / d a_i = a_i / |a_i| while the clamp is inactive.
        if (norm(i) > eps) {
          grad->row(i) -= dots(i, j) / (denom * clamped(i)) * a.row(i) / norm(i);
        }
      }
    }
  }
  return total;
}

double loss_ce(const MatrixXd& a, const MatrixXd& y, double eps, CeReduction reduction,
               MatrixXd* grad) {
  if (a.rows() != y.rows() || a.cols() != y.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "assignment and label shapes differ");
  }
  const double scale =
      reduction == CeReduction::kMeanEntries ? 1.0 / static_cast<double>(a.size()) : 1.0;
  double pos = 0.0, neg = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      pos += y(i, j) * std::log(a(i, j) + eps);
      neg += (1.0 - y(i, j)) * std::log(1.0 - a(i, j) + eps);
    }
  }
  if (grad != nullptr) {
    grad->resize(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = 0; j < a.cols(); ++j) {
        (*grad)(i, j) = scale * (-0.9 * y(i, j) / (a(i, j) + eps) +
                                 0.1 * (1.0 - y(i, j)) / (1.0 - a(i, j) + eps));
      }
    }
  }
  return -0.9 * scale * pos - 0.1 * scale * neg;
}

double loss_total(const MatrixXd& soft, const MatrixXd& hard, const MatrixXd& labels, double alpha,
                  double eps, CeReduction reduction) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  }
  return alpha * (loss_validity(hard) + loss_diversity(soft, eps)) +
         (1.0 - alpha) * loss_ce(soft, labels, eps, reduction);
}

double training_objective(const MatrixXd& soft, const MatrixXd& labels,
                          const ObjectiveOptions& options, MatrixXd* grad) {
  if (grad == nullptr) {
    return options.alpha * (loss_validity(soft) + loss_diversity(soft, options.eps)) +
           (1.0 - options.alpha) * loss_ce(soft, labels, options.eps, options.reduction);
  }
  MatrixXd g_val, g_div, g_ce;
  const double value =
      options.alpha * (loss_validity(soft, &g_val) + loss_diversity(soft, options.eps, &g_div)) +
      (1.0 - options.alpha) * loss_ce(soft, labels, options.eps, options.reduction, &g_ce);
  *grad = options.alpha * (g_val + g_div) + (1.0 - options.alpha) * g_ce;
  return value;
}

MatrixXd harden(const MatrixXd& soft) {
  MatrixXd hard = MatrixXd::Zero(soft.rows(), soft.cols());
  for (Index i = 0; i < soft.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < soft.cols(); ++j) {
      if (soft(i, j) > soft(i, best)) best = j;
    }
    hard(i, best) = 1.0;
  }
  return hard;
}

}  // namespace swarmwatch::gnn
