#include "swarmwatch/lsa.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "swarmwatch/error.hpp"

namespace swarmwatch {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

CostMatrix::CostMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::kInvalidMatrix, "ragged initializer rows");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

void CostMatrix::validate() const {
  if (rows_ == 0 || cols_ == 0) throw Error(ErrorCode::kInvalidMatrix, "empty cost matrix");
  if (rows_ > cols_) {
    throw Error(ErrorCode::kInvalidMatrix, std::to_string(rows_) + " rows > " +
                                               std::to_string(cols_) + " cols; pad columns");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k]) || data_[k] < 0.0) {
      throw Error(ErrorCode::kInvalidMatrix, "entry (" + std::to_string(k / cols_) + ", " +
                                                 std::to_string(k % cols_) +
                                                 ") is negative or non-finite");
    }
  }
}

double assignment_cost(const CostMatrix& cost, std::span<const std::size_t> assignment) {
  double total = 0.0;
  for (std::size_t r = 0; r < assignment.size(); ++r) total += cost(r, assignment[r]);
  return total;
}

LsaResult solve_lsa(const CostMatrix& cost) {
  cost.validate();
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Potentials u (rows), v (cols) and the column->row matching p, all 1-based
  // with index 0 as the virtual source of each augmenting path.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), min_slack(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  LsaResult result;
  result.assignment.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) result.assignment[p[j] - 1] = j - 1;
  }
  result.total_cost = assignment_cost(cost, result.assignment);
  return result;
}

namespace {

struct Enumerator {
  const CostMatrix& cost;
  std::vector<std::size_t> current;
  std::vector<char> taken;
  LsaResult best{{}, std::numeric_limits<double>::infinity()};

  void visit(std::size_t row, double partial) {
    if (row == cost.rows()) {
      if (partial < best.total_cost) best = {current, partial};
      return;
    }
    for (std::size_t c = 0; c < cost.cols(); ++c) {
      if (taken[c]) continue;
      taken[c] = 1;
      current[row] = c;
      visit(row + 1, partial + cost(row, c));
      taken[c] = 0;
    }
  }
};

}  // namespace

LsaResult brute_force_lsa(const CostMatrix& cost) {
  cost.validate();
  if (cost.cols() > 9) {
    throw Error(ErrorCode::kTooLarge, std::to_string(cost.cols()) + " columns exceeds 9");
  }
  Enumerator e{cost, std::vector<std::size_t>(cost.rows()), std::vector<char>(cost.cols())};
  e.visit(0, 0.0);
  // Summation order along the DFS matches assignment_cost's row order.
  e.best.total_cost = assignment_cost(cost, e.best.assignment);
  return e.best;
}

}  // namespace swarmwatch
