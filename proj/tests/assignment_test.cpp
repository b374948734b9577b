#include <gtest/gtest.h>

#include <random>

#include "aapa/assignment.hpp"
#include "oracles.hpp"

using namespace aapa;
using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

TEST(Assignment, Diagonal) {
  const auto r = solve_assignment(CostMatrix{{0, 9}, {9, 0}});
  EXPECT_EQ(r.pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(r.total, 0.0);
}

TEST(Assignment, AntiDiagonal) {
  const auto r = solve_assignment(CostMatrix{{1, 2}, {2, 4}});
  EXPECT_EQ(r.pairs, (Pairs{{0, 1}, {1, 0}}));
  EXPECT_EQ(r.total, 4.0);
}

TEST(Assignment, TallMatrixLeavesRowUnmatched) {
  const auto r = solve_assignment(CostMatrix{{1, 8}, {2, 1}, {9, 9}});
  EXPECT_EQ(r.pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(r.total, 2.0);
}

TEST(Assignment, WideMatrixLeavesColumnUnmatched) {
  const auto r = solve_assignment(CostMatrix{{1, 2, 9}, {8, 1, 9}});
  EXPECT_EQ(r.pairs, (Pairs{{0, 0}, {1, 1}}));
}

TEST(Assignment, EmptyInputs) {
  EXPECT_TRUE(solve_assignment(CostMatrix{}).pairs.empty());
  EXPECT_TRUE(solve_assignment(CostMatrix(0, 3)).pairs.empty());
  EXPECT_TRUE(solve_assignment(CostMatrix(3, 0)).pairs.empty());
}

TEST(Assignment, PadValueDoesNotChangeRealPairs) {
  const CostMatrix m{{4, 1}, {2, 7}, {3, 3}};
  EXPECT_EQ(solve_assignment(m, 0.0).pairs, solve_assignment(m, 1e6).pairs);
}

TEST(Assignment, AllTiesPickLexicographicallySmallest) {
  const auto r = solve_assignment(Matrix<int>(3, 3, 5));
  EXPECT_EQ(r.pairs, (Pairs{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(AssignmentProperty, MatchesBruteForceOnIntegers) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> dim(1, 6), val(0, 9);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    Matrix<int> m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = val(rng);
    const auto got = solve_assignment(m);
    const auto want = oracle::brute_force_assignment(m);
    ASSERT_EQ(got.pairs, want.pairs) << "trial " << trial;
    ASSERT_EQ(got.total, want.total) << "trial " << trial;
  }
}

TEST(AssignmentProperty, OptimalTotalOnDoubles) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> val(0.0, 6500.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    CostMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = val(rng);
    const auto got = solve_assignment(m);
    ASSERT_EQ(got.pairs.size(), std::min(rows, cols));
    ASSERT_NEAR(got.total, oracle::brute_force_total(m), 1e-6) << "trial " << trial;
  }
}

TEST(AssignmentProperty, TransposeGivesSameTotal) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dim(1, 6), val(0, 50);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix<int> m(dim(rng), dim(rng));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = val(rng);
    EXPECT_EQ(solve_assignment(m).total, solve_assignment(m.transposed()).total);
  }
}
