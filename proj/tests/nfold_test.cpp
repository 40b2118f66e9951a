// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "gblocks/errors.hpp"
#include "gblocks/growth_family.hpp"
#include "gblocks/nfold.hpp"
#include "nfold_support.hpp"
#include "test_support.hpp"

namespace gblocks::nfold {
namespace {

Brick make_brick(Matrix top, Matrix local, Vec local_rhs, Vec lower, Vec upper, std::vector<ConvexTerm> terms) {
  return Brick{std::move(top), std::move(local), std::move(local_rhs), std::move(lower), std::move(upper),
               std::move(terms)};
}

std::vector<ConvexTerm> zero_terms(std::size_t w) { return std::vector<ConvexTerm>(w, LinearTerm{0}); }

TEST(EnumerateBrickSolutionsTest, UniqueSolution) {
  Brick b = make_brick(Matrix::from_rows({{5}}), Matrix::from_rows({{2}}), {-2}, {-3}, {3}, {QuadraticTerm{1, 0}});
  auto c = enumerate_brick_solutions(b);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].y, Vec{-1});
  EXPECT_EQ(c[0].contribution, Vec{-5});
  EXPECT_EQ(c[0].cost, 1);
}

TEST(EnumerateBrickSolutionsTest, InfeasibleLocalRow) {
  Brick b = make_brick(Matrix::from_rows({{1}}), Matrix::from_rows({{2}}), {1}, {-3}, {3}, zero_terms(1));
  EXPECT_TRUE(enumerate_brick_solutions(b).empty());
}

TEST(EnumerateBrickSolutionsTest, WidthTwo) {
  Brick b = make_brick(Matrix::from_rows({{1, 1}}), Matrix::from_rows({{3, 4}}), {-1}, {-2, -2}, {2, 2},
                       zero_terms(2));
  auto c = enumerate_brick_solutions(b);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].y, (Vec{1, -1}));
}

TEST(EnumerateBrickSolutionsTest, LexicographicOrder) {
  Brick b = make_brick(Matrix::from_rows({{1, 0}}), Matrix(0, 2), {}, {-1, 0}, {1, 1}, zero_terms(2));
  auto c = enumerate_brick_solutions(b);
  ASSERT_EQ(c.size(), 6u);
  for (std::size_t k = 1; k < c.size(); ++k) EXPECT_LT(c[k - 1].y, c[k].y);
}

TEST(EnumerateBrickSolutionsTest, NodeCapIsResourceError) {
  Brick b = make_brick(Matrix::from_rows({{1, 1, 1}}), Matrix(0, 3), {}, Vec(3, -20), Vec(3, 20), zero_terms(3));
  EXPECT_THROW(enumerate_brick_solutions(b, 100), ResourceError);
}

TEST(SolveNFoldExactTest, ForcedBricks) {
  NFoldInstance inst;
  for (int k = 0; k < 2; ++k)
    inst.bricks.push_back(
        make_brick(Matrix::from_rows({{1}}), Matrix::from_rows({{1}}), {1}, {-3}, {3}, {LinearTerm{2}}));
  inst.top_rhs = {2};
  auto s = solve_nfold_exact(inst);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->bricks, (std::vector<Vec>{{1}, {1}}));
  EXPECT_EQ(s->objective, 4);
}

TEST(SolveNFoldExactTest, UnreachableTopRhs) {
  NFoldInstance inst;
  for (int k = 0; k < 2; ++k)
    inst.bricks.push_back(make_brick(Matrix::from_rows({{1}}), Matrix(0, 1), {}, {0}, {1}, zero_terms(1)));
  inst.top_rhs = {3};
  EXPECT_FALSE(solve_nfold_exact(inst).has_value());
}

TEST(SolveNFoldExactTest, QuadraticTieBreaksLexicographically) {
  // (y−1)² = y² − 2y + 1; the constant is dropped, so the objective is 1 − 2 = −1 here.
  NFoldInstance inst;
  for (int k = 0; k < 2; ++k)
    inst.bricks.push_back(
        make_brick(Matrix::from_rows({{1}}), Matrix(0, 1), {}, {0}, {3}, {QuadraticTerm{1, -2}}));
  inst.top_rhs = {3};
  auto s = solve_nfold_exact(inst);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->bricks, (std::vector<Vec>{{1}, {2}}));
  EXPECT_EQ(s->objective + 2, 1);
}

TEST(SolveNFoldExactTest, StateCapIsResourceError) {
  NFoldInstance inst;
  for (int k = 0; k < 3; ++k)
    inst.bricks.push_back(make_brick(Matrix::from_rows({{1}, {1}}), Matrix(0, 1), {}, {-50}, {50}, zero_terms(1)));
  inst.top_rhs = {0, 0};
  NFoldLimits limits;
  limits.state_cap = 10;
  EXPECT_THROW(solve_nfold_exact(inst, limits), ResourceError);
}

TEST(SolveNFoldExactTest, MalformedInstanceIsStructuralError) {
  NFoldInstance inst;
  inst.bricks.push_back(make_brick(Matrix::from_rows({{1, 1}}), Matrix(0, 1), {}, {0}, {1}, zero_terms(1)));
  inst.top_rhs = {0};
  EXPECT_THROW(solve_nfold_exact(inst), StructuralError);
}

TEST(StepBoundsTest, CeilingAndFloor) {
  auto [lo, hi] = step_bounds({-3, 0}, {3, 5}, {0, 1}, 2);
  EXPECT_EQ(lo, (Vec{-1, 0}));
  EXPECT_EQ(hi, (Vec{1, 2}));
  EXPECT_THROW(step_bounds({0}, {1}, {0}, 0), DomainError);
  EXPECT_THROW(step_bounds({0}, {1}, {0}, -1), DomainError);
}

TEST(BuildIpRhoPhiTest, ZeroStepIsFeasible) {
  auto inst = growth_instance(2, 5);
  BlockVector x0 = BlockVector::zeros(inst.dims);
  auto ip = build_ip_rho_phi(inst, x0, 1, 0, StepObjective::kConvex);
  auto s = solve_nfold_exact(ip);
  ASSERT_TRUE(s.has_value());
  EXPECT_LE(s->objective, 0);
}

TEST(BuildIpRhoPhiTest, GrowthLocalRowsCarryMinusPhi) {
  auto inst = growth_instance(2, 5);
  auto ip = build_ip_rho_phi(inst, BlockVector::zeros(inst.dims), 1, 1, StepObjective::kLinear);
  ASSERT_EQ(ip.bricks.size(), 3u);
  EXPECT_EQ(ip.bricks[0].local, inst.B);
  EXPECT_EQ(ip.bricks[0].local_rhs, Vec{1});
  EXPECT_EQ(ip.bricks[0].top, inst.C);
  for (std::size_t i = 1; i <= 2; ++i) {
    EXPECT_EQ(ip.bricks[i].local, Matrix::from_rows({{3, 4}}));
    EXPECT_EQ(ip.bricks[i].local_rhs, Vec{-1});
    EXPECT_EQ(ip.bricks[i].top, inst.D[i - 1]);
  }
  EXPECT_TRUE(is_zero(ip.top_rhs));
}

TEST(BuildIpRhoPhiTest, BoundMapping) {
  auto inst = growth_instance(2, 3);
  auto ip = build_ip_rho_phi(inst, BlockVector::zeros(inst.dims), 2, 0, StepObjective::kLinear);
  for (const auto& b : ip.bricks)
    for (std::size_t j = 0; j < b.width(); ++j) {
      EXPECT_EQ(b.lower[j], -1);
      EXPECT_EQ(b.upper[j], 1);
    }
  EXPECT_THROW(build_ip_rho_phi(inst, BlockVector::zeros(inst.dims), 0, 0, StepObjective::kLinear), DomainError);
}

TEST(BuildIpRhoPhiTest, RequiresFeasibleStart) {
  auto inst = growth_instance(2, 3);
  BlockVector x0 = BlockVector::zeros(inst.dims);
  x0.brick0[0] = 1;
  EXPECT_THROW(build_ip_rho_phi(inst, x0, 1, 0, StepObjective::kLinear), DomainError);
}

TEST(NFoldPropertyTest, MatchesBruteForceObjectiveAndArgmin) {
  std::mt19937_64 rng(51);
  int feasible = 0;
  for (int t = 0; t < 200; ++t) {
    NFoldInstance inst = testing::random_nfold(rng);
    auto expect = testing::naive_nfold_solve(inst);
    auto got = solve_nfold_exact(inst);
    ASSERT_EQ(expect.has_value(), got.has_value()) << "instance " << t;
    if (!expect) continue;
    ++feasible;
    ASSERT_EQ(got->objective, expect->objective) << "instance " << t;
    ASSERT_EQ(got->bricks, expect->bricks) << "instance " << t;
  }
  EXPECT_GT(feasible, 120);
}

TEST(NFoldPropertyTest, SolutionsSatisfyConstraints) {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 300; ++t) {
    NFoldInstance inst = testing::random_nfold(rng);
    auto got = solve_nfold_exact(inst);
    if (!got) continue;
    Vec top(inst.top_rhs.size(), 0);
    Int cost = 0;
    for (std::size_t k = 0; k < inst.bricks.size(); ++k) {
      const Brick& b = inst.bricks[k];
      const Vec& y = got->bricks[k];
      ASSERT_EQ(testing::naive_product(b.local, y), b.local_rhs);
      for (std::size_t j = 0; j < y.size(); ++j) ASSERT_TRUE(b.lower[j] <= y[j] && y[j] <= b.upper[j]);
      top = add(top, testing::naive_product(b.top, y));
      cost += testing::term_sum(b.terms, y);
    }
    ASSERT_EQ(top, inst.top_rhs);
    ASSERT_EQ(cost, got->objective);
  }
}

TEST(NFoldPropertyTest, ConvexModeObjectiveIsExactDelta) {
  std::mt19937_64 rng(53);
  int checked = 0;
  for (int t = 0; t < 300 && checked < 100; ++t) {
    // Instance with a known feasible start: rhs is H·x0.
    std::size_t n = static_cast<std::size_t>(testing::uniform(rng, 1, 3));
    Matrix C = Matrix::from_rows({{testing::uniform(rng, -2, 2)}});
    Matrix B = Matrix::from_rows({{testing::uniform(rng, -2, 2)}});
    std::vector<Matrix> A, D;
    for (std::size_t i = 0; i < n; ++i) {
      A.push_back(Matrix::from_rows({{testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2)}}));
      D.push_back(Matrix::from_rows({{testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2)}}));
    }
    std::size_t cols = 1 + 2 * n;
    Vec lower(cols), upper(cols), x0(cols);
    std::vector<ConvexTerm> terms;
    for (std::size_t j = 0; j < cols; ++j) {
      lower[j] = testing::uniform(rng, -3, 0);
      upper[j] = lower[j] + testing::uniform(rng, 0, 5);
      x0[j] = testing::uniform(rng, lower[j], upper[j]);
      terms.push_back(testing::random_term(rng, lower[j], upper[j]));
    }
    auto probe = make_instance(C, B, A, D, Vec(1 + n, 0), lower, upper, SeparableObjective(terms));
    Vec rhs = testing::naive_product(testing::naive_full_matrix(probe), x0);
    auto inst = make_instance(C, B, A, D, rhs, lower, upper, SeparableObjective(terms));
    BlockVector start = BlockVector::unflatten(x0, 1, 2, n);
    Int rho = Int{1} << testing::uniform(rng, 0, 2);
    Int phi = testing::uniform(rng, -2, 2);
    auto ip = build_ip_rho_phi(inst, start, rho, phi, StepObjective::kConvex);
    auto s = solve_nfold_exact(ip);
    if (!s) continue;
    ++checked;
    Vec y;
    for (const auto& part : s->bricks) y.insert(y.end(), part.begin(), part.end());
    Vec x1(cols);
    for (std::size_t j = 0; j < cols; ++j) x1[j] = x0[j] + rho * y[j];
    Int expect = 0;
    for (std::size_t j = 0; j < cols; ++j) expect += evaluate_term(terms[j], x1[j]) - evaluate_term(terms[j], x0[j]);
    ASSERT_EQ(s->objective, expect) << "instance " << t;
    ASSERT_TRUE(is_feasible(inst, BlockVector::unflatten(x1, 1, 2, n)));
  }
  EXPECT_GE(checked, 50);
}

}  // namespace
}  // namespace gblocks::nfold
