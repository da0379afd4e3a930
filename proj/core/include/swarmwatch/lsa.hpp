#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace swarmwatch {

/// Dense rectangular cost matrix, row-major. Rows are the side that must be
/// fully assigned (agents, set-1 boxes), so rows() <= cols().
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  CostMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  /// Throws InvalidMatrix unless 1 <= rows <= cols and all entries are finite and >= 0.
  void validate() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Row index -> column index; total and injective.
using Assignment = std::vector<std::size_t>;

struct LsaResult {
  Assignment assignment;
  double total_cost = 0.0;
};

/// Exact minimum-cost assignment of every row to a distinct column
/// (shortest augmenting path Hungarian, O(rows^2 * cols)).
LsaResult solve_lsa(const CostMatrix& cost);

/// Exhaustive enumeration of injective maps, for testing. Ties resolve to the
/// lexicographically smallest assignment. Throws TooLarge when cols > 9.
LsaResult brute_force_lsa(const CostMatrix& cost);

double assignment_cost(const CostMatrix& cost, std::span<const std::size_t> assignment);

}  // namespace swarmwatch
