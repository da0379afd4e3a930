#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "swarmwatch/error.hpp"
#include "swarmwatch/lsa.hpp"
#include "test_support.hpp"

using namespace swarmwatch;

namespace {

bool injective(const Assignment& a, std::size_t cols) {
  std::set<std::size_t> seen(a.begin(), a.end());
  return seen.size() == a.size() && std::all_of(a.begin(), a.end(), [&](auto c) { return c < cols; });
}

// Independent oracle: permute columns with std::next_permutation (square or padded).
double permutation_minimum(const CostMatrix& c) {
  std::vector<std::size_t> cols(c.cols());
  std::iota(cols.begin(), cols.end(), 0);
  double best = INFINITY;
  do {
    double s = 0;
    for (std::size_t i = 0; i < c.rows(); ++i) s += c(i, cols[i]);
    best = std::min(best, s);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

}  // namespace

TEST_CASE("small fixed matrices") {
  CHECK(solve_lsa(CostMatrix{{0}}).total_cost == 0);
  CHECK(solve_lsa(CostMatrix{{0}}).assignment == Assignment{0});

  const auto r2 = solve_lsa(CostMatrix{{1, 2}, {2, 1}});
  CHECK(r2.total_cost == 2);
  CHECK(r2.assignment == Assignment{0, 1});

  const CostMatrix m3{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  const auto r3 = solve_lsa(m3);
  CHECK(r3.total_cost == 5);
  CHECK(r3.assignment == Assignment{1, 0, 2});
  CHECK(permutation_minimum(m3) == 5);
}

TEST_CASE("brute force basics") {
  CHECK(brute_force_lsa(CostMatrix{{0}}).total_cost == 0);
  CostMatrix eye(5, 5, 1.0);
  for (std::size_t i = 0; i < 5; ++i) eye(i, i) = 0;
  const auto r = brute_force_lsa(eye);
  CHECK(r.total_cost == 0);
  CHECK(r.assignment == Assignment{0, 1, 2, 3, 4});
  // Ties resolve to the lexicographically smallest assignment.
  CHECK(brute_force_lsa(CostMatrix(2, 3, 1.0)).assignment == Assignment{0, 1});
  try {
    brute_force_lsa(CostMatrix(2, 10, 1.0));
    FAIL("accepted 10 columns");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooLarge);
  }
}

TEST_CASE("invalid matrices") {
  auto expect_invalid = [](const CostMatrix& c) {
    try {
      solve_lsa(c);
      FAIL("accepted an invalid matrix");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidMatrix);
    }
  };
  expect_invalid(CostMatrix(3, 2, 1.0));
  expect_invalid(CostMatrix{{1, NAN}});
  expect_invalid(CostMatrix{{1, INFINITY}});
  expect_invalid(CostMatrix{{1, -1}});
  expect_invalid(CostMatrix());
}

TEST_CASE("oracle equivalence on random rectangular matrices") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  for (int k = 0; k < 300; ++k) {
    std::size_t m = dim(rng), n = dim(rng);
    if (m > n) std::swap(m, n);
    const CostMatrix c = test::random_costs(rng, m, n);
    const auto fast = solve_lsa(c);
    const auto slow = brute_force_lsa(c);
    CHECK(injective(fast.assignment, n));
    CHECK(fast.total_cost == slow.total_cost);
    CHECK(fast.total_cost == assignment_cost(c, fast.assignment));
    if (m == n) CHECK(std::abs(permutation_minimum(c) - fast.total_cost) < 1e-12);
  }
}

TEST_CASE("integer costs with many ties") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> v(0, 3);
  for (int k = 0; k < 200; ++k) {
    CostMatrix c(4, 6);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 6; ++j) c(i, j) = v(rng);
    }
    CHECK(solve_lsa(c).total_cost == brute_force_lsa(c).total_cost);
  }
}

TEST_CASE("row permutation and row offset invariance") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const CostMatrix c = test::random_costs(rng, 5, 7);
    const auto base = solve_lsa(c);

    std::vector<std::size_t> perm{0, 1, 2, 3, 4};
    std::shuffle(perm.begin(), perm.end(), rng);
    CostMatrix p(5, 7);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 7; ++j) p(i, j) = c(perm[i], j);
    }
    const auto permuted = solve_lsa(p);
    CHECK(std::abs(permuted.total_cost - base.total_cost) < 1e-12);
    for (std::size_t i = 0; i < 5; ++i) CHECK(permuted.assignment[i] == base.assignment[perm[i]]);

    CostMatrix shifted = c;
    for (std::size_t j = 0; j < 7; ++j) shifted(2, j) += 3.5;
    CHECK(solve_lsa(shifted).assignment == base.assignment);
  }
}
