// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "gblocks/block_instance.hpp"
#include "gblocks/errors.hpp"
#include "gblocks/growth_family.hpp"
#include "gblocks/random_instance.hpp"
#include "test_support.hpp"

namespace gblocks {
namespace {

using testing::for_each_box_point;

BlockInstance growth(std::size_t n) { return growth_instance(n); }

BlockVector bv(const Vec& flat, const BlockInstance& inst) {
  return BlockVector::unflatten(flat, inst.dims.tB, inst.dims.tA, inst.dims.n);
}

TEST(AssembleFullTest, GrowthFamilyTwoBricks) {
  Matrix H = assemble_full(growth(2));
  Matrix expected = Matrix::from_rows({{-1, -1, -1, 5, 3, 5, 3}, {0, -1, 1, 3, 4, 0, 0}, {0, -1, 1, 0, 0, 3, 4}});
  EXPECT_EQ(H, expected);
}

TEST(AssembleFullTest, ZeroBlocks) {
  auto inst = make_instance(Matrix(1, 1), Matrix(1, 1), {Matrix(1, 1)}, {Matrix(1, 1)}, {0, 0}, {0, 0}, {0, 0},
                            SeparableObjective::zero(2));
  EXPECT_EQ(assemble_full(inst), Matrix(2, 2));
}

TEST(AssembleFullTest, AllOnes) {
  Matrix one = Matrix::from_rows({{1}});
  auto inst = make_instance(one, one, {one}, {one}, {0, 0}, {0, 0}, {0, 0}, SeparableObjective::zero(2));
  EXPECT_EQ(assemble_full(inst), Matrix::from_rows({{1, 1}, {1, 1}}));
}

TEST(AssembleFullTest, MismatchedBlocksAreStructuralErrors) {
  Matrix one = Matrix::from_rows({{1}});
  Matrix wide = Matrix::from_rows({{1, 2}});
  EXPECT_THROW(make_instance(one, one, {one, wide}, {one, one}, {0, 0, 0}, {0, 0, 0}, {0, 0, 0},
                             SeparableObjective::zero(3)),
               StructuralError);
}

TEST(ResidualTest, WitnessIsInKernel) {
  auto inst = growth(2);
  EXPECT_EQ(residual(inst, bv({1, 1, 2, 1, -1, 1, -1}, inst)), Vec({0, 0, 0}));
}

TEST(ResidualTest, ZeroVector) {
  auto inst = growth(3);
  EXPECT_TRUE(is_zero(residual(inst, BlockVector::zeros(inst.dims))));
}

TEST(ResidualTest, FirstUnitVector) {
  auto inst = growth(2);
  EXPECT_EQ(residual(inst, bv({1, 0, 0, 0, 0, 0, 0}, inst)), Vec({-1, 0, 0}));
}

TEST(ResidualTest, WrongBrickCountIsStructuralError) {
  auto inst = growth(2);
  BlockVector x = BlockVector::zeros(inst.dims);
  x.bricks.pop_back();
  EXPECT_THROW(residual(inst, x), StructuralError);
}

TEST(InKernelTest, Examples) {
  EXPECT_TRUE(in_kernel(growth(3), bv({1, 2, 3, 1, -1, 1, -1, 1, -1}, growth(3))));
  EXPECT_TRUE(in_kernel(growth(2), BlockVector::zeros(growth(2).dims)));
  EXPECT_FALSE(in_kernel(growth(2), bv({1, 1, 2, 1, -1, 1, 0}, growth(2))));
}

TEST(ConformalLeqTest, Examples) {
  EXPECT_TRUE(conformal_leq(Vec{0, 0}, Vec{5, -7}));
  EXPECT_TRUE(conformal_leq(Vec{1, -2}, Vec{2, -3}));
  EXPECT_FALSE(conformal_leq(Vec{1, 2}, Vec{2, -3}));
  EXPECT_THROW(conformal_leq(Vec{1}, Vec{1, 2}), StructuralError);
}

TEST(MaxAbsEntryTest, Examples) {
  EXPECT_EQ(max_abs_entry(growth(2)), 5);
  Matrix z(1, 1);
  auto zero = make_instance(z, z, {z}, {z}, {0, 0}, {0, 0}, {0, 0}, SeparableObjective::zero(2));
  EXPECT_EQ(max_abs_entry(zero), 0);
  auto m = [](Int v) { return Matrix::from_rows({{v}}); };
  auto inst = make_instance(m(-7), m(1), {m(2)}, {m(3)}, {0, 0}, {0, 0}, {0, 0}, SeparableObjective::zero(2));
  EXPECT_EQ(max_abs_entry(inst), 7);
  EXPECT_EQ(inst.dims.delta, 7);
}

BlockInstance leq_instance(std::size_t sD, std::size_t tA, std::size_t n) {
  std::vector<Matrix> A, D;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix a(1, tA), d(sD, tA);
    for (std::size_t c = 0; c < tA; ++c) {
      a(0, c) = static_cast<Int>(c + 1);
      for (std::size_t r = 0; r < sD; ++r) d(r, c) = 1;
    }
    A.push_back(a);
    D.push_back(d);
  }
  Matrix C(sD, 1);
  Matrix B = Matrix::from_rows({{1}});
  std::size_t cols = 1 + n * tA;
  return make_instance(C, B, A, D, Vec(sD + n, 2), Vec(cols, -1), Vec(cols, 1), SeparableObjective::zero(cols),
                       Sense::kLessEqual);
}

TEST(ToEqualityTest, OneTopRowTwoColumns) {
  auto inst = leq_instance(1, 2, 2);
  auto eq = to_equality(inst);
  EXPECT_EQ(eq.dims.tA, 4u);
  EXPECT_EQ(eq.dims.cols() - inst.dims.cols(), 4u);
  EXPECT_EQ(eq.A[0], Matrix::from_rows({{1, 2, 1, 0}}));
  EXPECT_EQ(eq.D[0], Matrix::from_rows({{1, 1, 0, 1}}));
  EXPECT_EQ(eq.sense, Sense::kEqual);
}

TEST(ToEqualityTest, TwoTopRowsOneColumn) {
  auto inst = leq_instance(2, 1, 3);
  auto eq = to_equality(inst);
  EXPECT_EQ(eq.dims.cols() - inst.dims.cols(), 9u);
  EXPECT_EQ(eq.D[0].cols(), 4u);
}

TEST(ToEqualityTest, SlackBoundsFromRowMinimum) {
  auto inst = leq_instance(1, 2, 2);
  auto eq = to_equality(inst);
  // Local row x0 + x1 + 2·x2 ≤ 2 over [−1, 1]³ has minimum −4, so the slack tops out at 6.
  EXPECT_EQ(eq.upper[1 + 2], 6);
  EXPECT_EQ(eq.lower[1 + 2], 0);
}

TEST(ToEqualityTest, RejectsMultiRowB) {
  Matrix B = Matrix::from_rows({{1}, {2}});
  Matrix A = Matrix::from_rows({{1}, {1}});
  auto inst = make_instance(Matrix(1, 1), B, {A}, {Matrix(1, 1)}, {0, 0, 0}, {0, 0}, {1, 1},
                            SeparableObjective::zero(2), Sense::kLessEqual);
  EXPECT_THROW(to_equality(inst), StructuralError);
}

TEST(ToEqualityTest, DegenerateInstanceRejected) {
  EXPECT_THROW(make_instance(Matrix(0, 1), Matrix(0, 1), {Matrix(0, 1)}, {Matrix(0, 1)}, {}, {0, 0}, {0, 0},
                             SeparableObjective::zero(2), Sense::kLessEqual),
               StructuralError);
}

TEST(BlockVectorTest, FlattenRoundTrip) {
  auto inst = growth(3);
  Vec flat = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  EXPECT_EQ(bv(flat, inst).flatten(), flat);
  EXPECT_EQ(bv(flat, inst).brick0, Vec({1, 2, 3}));
  EXPECT_EQ(bv(flat, inst).bricks[2], Vec({8, 9}));
}

TEST(ObjectiveTest, TableConvexityChecked) {
  EXPECT_TRUE(is_discretely_convex(TableTerm{0, {3, 1, 0, 0, 2}}));
  EXPECT_FALSE(is_discretely_convex(TableTerm{0, {0, 2, 3}}));
  SeparableObjective bad({TableTerm{0, {0, 2, 3}}});
  EXPECT_THROW(bad.validate(Vec{0}, Vec{2}), DomainError);
  SeparableObjective narrow({TableTerm{0, {0, 1}}});
  EXPECT_THROW(narrow.validate(Vec{0}, Vec{3}), DomainError);
  EXPECT_THROW(SeparableObjective({QuadraticTerm{-1, 0}}).validate(Vec{0}, Vec{1}), DomainError);
}

TEST(ObjectiveTest, ExactEvaluation) {
  SeparableObjective f({LinearTerm{3}, QuadraticTerm{2, -1}, TableTerm{-1, {4, 1, 0}}}, 10);
  EXPECT_EQ(f.evaluate(Vec{2, -3, 1}), 10 + 6 + (18 + 3) + 0);
}

TEST(CheckedArithmeticTest, OverflowIsAnError) {
  EXPECT_THROW(checked_mul(Int{1} << 62, 4), OverflowError);
  EXPECT_THROW(checked_add(std::numeric_limits<Int>::max(), 1), OverflowError);
  EXPECT_EQ(floor_div(-3, 2), -2);
  EXPECT_EQ(ceil_div(-3, 2), -1);
}

TEST(RankOneFactorTest, FactorsAndRejects) {
  auto f = factor_rank_one(Matrix::from_rows({{-2, 4}, {1, -2}}));
  EXPECT_EQ(f.r, Vec({1, -2}));
  EXPECT_EQ(f.v, Vec({-2, 1}));
  EXPECT_THROW(factor_rank_one(Matrix::from_rows({{1, 0}, {0, 1}})), StructuralError);
  auto single = coupling_factor(Matrix::from_rows({{0, -2, 4}}));
  EXPECT_EQ(single.r, Vec({0, -2, 4}));
  EXPECT_EQ(single.v, Vec({1}));
}

// Properties.

TEST(BlockcorePropertyTest, BlockwiseResidualMatchesDenseProduct) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    RandomInstanceSpec spec;
    spec.sA = t % 4 == 0 ? 2 : 1;
    auto inst = random_instance(rng, spec);
    Vec x = testing::random_vec(rng, inst.dims.cols(), -4, 4);
    Vec dense = sub(testing::naive_product(testing::naive_full_matrix(inst), x), inst.rhs);
    ASSERT_EQ(residual(inst, bv(x, inst)), dense) << "instance " << t;
    ASSERT_EQ(assemble_full(inst), testing::naive_full_matrix(inst));
  }
}

TEST(BlockcorePropertyTest, ConformalOrderIsPartialOrder) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 2000; ++t) {
    std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 1, 4));
    Vec x = testing::random_vec(rng, d, -2, 2), y = testing::random_vec(rng, d, -2, 2),
        z = testing::random_vec(rng, d, -2, 2);
    ASSERT_TRUE(conformal_leq(x, x));
    if (conformal_leq(x, y) && conformal_leq(y, x)) {
      ASSERT_EQ(x, y);
    }
    if (conformal_leq(x, y) && conformal_leq(y, z)) {
      ASSERT_TRUE(conformal_leq(x, z));
    }
  }
}

TEST(BlockcorePropertyTest, SlackConversionPreservesFeasibility) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 150; ++t) {
    RandomInstanceSpec spec;
    spec.max_n = 2;
    spec.max_tA = 1;
    spec.max_tB = 2;
    spec.max_sD = 1;
    spec.max_bound_width = 2;
    spec.sense = Sense::kLessEqual;
    auto inst = random_instance(rng, spec);
    auto eq = to_equality(inst);
    for_each_box_point(inst.lower, inst.upper, [&](const Vec& x) {
      BlockVector xb = bv(x, inst);
      bool feasible = is_feasible(inst, xb);
      bool extendable = false;
      // Slack coordinates are the tail of each lifted brick; search them exhaustively.
      Vec lo = eq.lower, hi = eq.upper;
      std::size_t w = eq.dims.tA;
      for (std::size_t j = 0; j < inst.dims.tB; ++j) lo[j] = hi[j] = x[j];
      for (std::size_t i = 0; i < inst.dims.n; ++i)
        for (std::size_t c = 0; c < inst.dims.tA; ++c) {
          std::size_t at = inst.dims.tB + i * w + c;
          lo[at] = hi[at] = x[inst.dims.tB + i * inst.dims.tA + c];
        }
      for_each_box_point(lo, hi, [&](const Vec& lifted) {
        if (extendable) return;
        BlockVector lb = BlockVector::unflatten(lifted, eq.dims.tB, w, eq.dims.n);
        if (is_feasible(eq, lb)) {
          extendable = true;
          EXPECT_EQ(project_from_equality(inst, lb), xb);
        }
      });
      ASSERT_EQ(feasible, extendable) << "instance " << t;
      ASSERT_EQ(lift_to_equality(inst, xb).has_value(), feasible);
    });
  }
}

TEST(BlockcorePropertyTest, GrowthWitnessDecomposition) {
  for (std::size_t n = 2; n <= 50; ++n) {
    auto inst = growth(n);
    Vec target = scale(growth_witness(n).flatten(), 11);
    auto parts = growth_witness_parts(n);
    ASSERT_EQ(parts.size(), n + 1);
    Vec sum(target.size(), 0);
    for (const auto& p : parts) {
      ASSERT_TRUE(in_kernel(inst, p));
      ASSERT_TRUE(conformal_leq(p.flatten(), target));
      sum = add(sum, p.flatten());
    }
    ASSERT_EQ(sum, target) << "n = " << n;
  }
}

}  // namespace
}  // namespace gblocks
