// Copyright 2026 The cibgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cibgame/lp.hpp"

#include <gtest/gtest.h>

#include <random>

#include "lp_oracles.hpp"

namespace cibgame {
namespace {

using testing::certificate_residuals;

TEST(SolveLp, SingleBoundedVariable) {
  LinearProgram lp;
  const int x = lp.add_variable(1.0);
  lp.add_inequality({{x, 1.0}}, 1.0);
  LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_DOUBLE_EQ(s.value, 1.0);
  EXPECT_DOUBLE_EQ(s.primal[x], 1.0);
  EXPECT_DOUBLE_EQ(s.dual[0], 1.0);
}

TEST(SolveLp, DegenerateOptimalFace) {
  LinearProgram lp;
  const int x = lp.add_variable(1.0);
  const int y = lp.add_variable(1.0);
  lp.add_inequality({{x, 1.0}, {y, 1.0}}, 1.0);
  LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
  EXPECT_NEAR(s.primal[x] + s.primal[y], 1.0, 1e-12);
}

TEST(SolveLp, DetectsInfeasible) {
  LinearProgram lp;
  const int x = lp.add_variable(1.0);
  lp.add_inequality({{x, 1.0}}, -1.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kInfeasible);
}

TEST(SolveLp, DetectsUnbounded) {
  LinearProgram lp;
  const int x = lp.add_variable(1.0);
  const int y = lp.add_variable(0.0);
  lp.add_inequality({{x, 1.0}, {y, -1.0}}, 1.0);
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kUnbounded);
}

TEST(SolveLp, FreeVariablesAndEqualities) {
  // maximize -v s.t. v >= 2 - w, v >= w - 4, w = 1 (free v, w).
  LinearProgram lp;
  const int v = lp.add_variable(-1.0, VarBound::kFree);
  const int w = lp.add_variable(0.0, VarBound::kFree);
  lp.add_inequality({{v, -1.0}, {w, -1.0}}, -2.0);
  lp.add_inequality({{v, -1.0}, {w, 1.0}}, 4.0);
  lp.add_equality({{w, 1.0}}, 1.0);
  LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.primal[v], 1.0, 1e-12);
  EXPECT_NEAR(s.value, -1.0, 1e-12);
  auto res = certificate_residuals(lp, s);
  EXPECT_LE(res.primal, 1e-8);
  EXPECT_LE(res.dual, 1e-8);
  EXPECT_LE(res.slackness, 1e-7);
  EXPECT_LE(res.gap, 1e-7);
}

TEST(SolveLp, IterationLimitIsReported) {
  std::mt19937_64 rng(5);
  auto dense = testing::random_bounded_lp(6, 6, rng);
  LpOptions opt;
  opt.max_iterations = 1;
  LinearProgram lp = dense.to_program();
  // Make the origin infeasible so that phase 1 needs several pivots.
  lp.add_inequality({{0, -1.0}, {1, -1.0}, {2, -1.0}}, -1.0);
  lp.add_inequality({{3, -1.0}, {4, -1.0}}, -1.0);
  EXPECT_EQ(solve_lp(lp, opt).status, LpStatus::kIterationLimit);
}

TEST(SolveLp, MatchesVertexEnumeration) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 20; ++trial) {
    auto dense = testing::random_bounded_lp(8, 8, rng);
    LinearProgram lp = dense.to_program();
    LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    auto oracle = testing::vertex_enumeration_value(dense);
    ASSERT_TRUE(oracle.has_value());
    EXPECT_NEAR(s.value, *oracle, 1e-8) << "trial " << trial;
    auto res = certificate_residuals(lp, s);
    EXPECT_LE(res.primal, 1e-8);
    EXPECT_LE(res.slackness, 1e-7);
    EXPECT_LE(res.gap, 1e-7);
  }
}

TEST(SolveLp, BlandTerminatesOnDegenerateInstances) {
  // Many redundant constraints through the same vertex.
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coef(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    LinearProgram lp;
    const int n = 5;
    for (int j = 0; j < n; ++j) lp.add_variable(coef(rng) - 1.0);
    for (int i = 0; i < 12; ++i) {
      std::vector<LpTerm> terms;
      for (int j = 0; j < n; ++j) terms.push_back({j, coef(rng) + 1.0});
      lp.add_inequality(std::move(terms), i % 3 == 0 ? 0.0 : 10.0);
    }
    LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    // C(n + m, m) bases per phase.
    double bound = 1.0;
    for (int k = 1; k <= n; ++k) bound = bound * (12 + k) / k;
    EXPECT_LE(static_cast<double>(s.iterations), 2.0 * bound);
  }
}

TEST(MatrixGame, Identity) {
  auto s = solve_matrix_game({{1, 0}, {0, 1}});
  EXPECT_NEAR(s.value, 0.5, 1e-12);
  EXPECT_NEAR(s.row_strategy[0], 0.5, 1e-12);
  EXPECT_NEAR(s.column_strategy[0], 0.5, 1e-12);
}

TEST(MatrixGame, Zero) {
  auto s = solve_matrix_game({{0, 0}, {0, 0}});
  EXPECT_EQ(s.value, 0.0);
}

TEST(MatrixGame, EmptyRejected) {
  EXPECT_THROW(solve_matrix_game({}), ValidationError);
}

TEST(MatrixGame, MatchesSupportEnumerationAndSymmetry) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 4, c = 5;
    std::vector<std::vector<double>> m(r, std::vector<double>(c));
    for (auto& row : m) for (auto& v : row) v = u(rng);
    auto s = solve_matrix_game(m);
    auto oracle = testing::support_enumeration_value(m);
    ASSERT_TRUE(oracle.has_value());
    EXPECT_NEAR(s.value, *oracle, 1e-8);
    // Epsilon-optimality of both strategies.
    double worst_col = -INFINITY, worst_row = INFINITY;
    for (int j = 0; j < c; ++j) {
      double v = 0.0;
      for (int i = 0; i < r; ++i) v += s.row_strategy[i] * m[i][j];
      worst_col = std::max(worst_col, v);
    }
    for (int i = 0; i < r; ++i) {
      double v = 0.0;
      for (int j = 0; j < c; ++j) v += m[i][j] * s.column_strategy[j];
      worst_row = std::min(worst_row, v);
    }
    EXPECT_LE(worst_col, s.value + 1e-8);
    EXPECT_GE(worst_row, s.value - 1e-8);
    std::vector<std::vector<double>> mt(c, std::vector<double>(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) mt[j][i] = -m[i][j];
    EXPECT_NEAR(s.value, -solve_matrix_game(mt).value, 1e-8);
  }
}

}  // namespace
}  // namespace cibgame
