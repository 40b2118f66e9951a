// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "gblocks/errors.hpp"
#include "gblocks/graver.hpp"
#include "gblocks/growth_family.hpp"
#include "test_support.hpp"

namespace gblocks::graverlab {
namespace {

// Reference: every box point with M·x = 0, then a quadratic ⊑-minimality filter.
std::set<Vec> naive_graver(const Matrix& M, Int radius) {
  std::vector<Vec> kernel;
  testing::for_each_box_point(Vec(M.cols(), -radius), Vec(M.cols(), radius), [&](const Vec& x) {
    if (!is_zero(x) && is_zero(testing::naive_product(M, x))) kernel.push_back(x);
  });
  std::set<Vec> out;
  for (const auto& g : kernel) {
    bool minimal = true;
    for (const auto& h : kernel)
      if (h != g && conformal_leq(h, g)) {
        minimal = false;
        break;
      }
    if (minimal) out.insert(g);
  }
  return out;
}

Matrix two_stage(const Vec& B, const Vec& A, std::size_t n) {
  Matrix M(n, B.size() + n * A.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < B.size(); ++j) M(i, j) = B[j];
    for (std::size_t j = 0; j < A.size(); ++j) M(i, B.size() + i * A.size() + j) = A[j];
  }
  return M;
}

TEST(KernelPointsTest, Examples) {
  auto pts = kernel_points(Matrix::from_rows({{3, 4}}), Vec{-4, -4}, Vec{4, 4});
  EXPECT_EQ(pts, (std::vector<Vec>{{-4, 3}, {0, 0}, {4, -3}}));
  EXPECT_EQ(kernel_points(Matrix::from_rows({{2, 5, 7}}), Vec{0, 0, 0}, Vec{0, 0, 0}),
            (std::vector<Vec>{{0, 0, 0}}));
  EXPECT_EQ(kernel_points(Matrix::from_rows({{1, 1}}), Vec{-1, -1}, Vec{1, 1}),
            (std::vector<Vec>{{-1, 1}, {0, 0}, {1, -1}}));
}

TEST(KernelPointsTest, NodeCapIsResourceError) {
  Matrix zero(1, 6);
  EXPECT_THROW(kernel_points(zero, Vec(6, -5), Vec(6, 5), 1000), ResourceError);
}

TEST(GraverWithinTest, Examples) {
  auto s = graver_within(Matrix::from_rows({{3, 4}}), 8);
  EXPECT_EQ(std::set<Vec>(s.elements.begin(), s.elements.end()), (std::set<Vec>{{4, -3}, {-4, 3}}));
  EXPECT_TRUE(s.complete_within_radius);
  EXPECT_EQ(s.radius, 8);
  auto t = graver_within(Matrix::from_rows({{1, 1}}), 3);
  EXPECT_EQ(std::set<Vec>(t.elements.begin(), t.elements.end()), (std::set<Vec>{{1, -1}, {-1, 1}}));
  EXPECT_THROW(graver_within(Matrix::from_rows({{1, 1}}), 0), DomainError);
}

TEST(GraverWithinTest, TwoStageSliceVerifiedElementwise) {
  Matrix M = Matrix::from_rows({{0, -1, 1, 3, 4}});
  auto s = graver_within(M, 4);
  ASSERT_FALSE(s.elements.empty());
  for (const auto& g : s.elements) {
    EXPECT_TRUE(is_zero(M.multiply(g)));
    EXPECT_LE(norm_inf(g), 4);
    EXPECT_TRUE(is_graver_element(M, g));
  }
  EXPECT_EQ(std::set<Vec>(s.elements.begin(), s.elements.end()), naive_graver(M, 4));
}

TEST(GraverWithinTest, DeterministicOrderByNormThenLex) {
  auto s = graver_within(Matrix::from_rows({{1, 2, -1}}), 3);
  for (std::size_t i = 1; i < s.elements.size(); ++i) {
    const auto& a = s.elements[i - 1];
    const auto& b = s.elements[i];
    EXPECT_TRUE(norm_inf(a) < norm_inf(b) || (norm_inf(a) == norm_inf(b) && a < b));
  }
}

TEST(IsGraverElementTest, GrowthWitness) {
  auto inst = growth_instance(3);
  EXPECT_TRUE(is_graver_element(assemble_full(inst), growth_witness(3).flatten()));
  auto two = growth_instance(2);
  EXPECT_TRUE(is_graver_element(assemble_full(two), Vec{1, 1, 2, 1, -1, 1, -1}));
}

TEST(IsGraverElementTest, DoubledElementIsNot) {
  EXPECT_FALSE(is_graver_element(Matrix::from_rows({{3, 4}}), Vec{8, -6}));
  EXPECT_FALSE(is_graver_element(assemble_full(growth_instance(2)), Vec{2, 2, 4, 2, -2, 2, -2}));
}

TEST(IsGraverElementTest, PreconditionErrors) {
  Matrix M = Matrix::from_rows({{3, 4}});
  EXPECT_THROW(is_graver_element(M, Vec{1, 1}), DomainError);
  EXPECT_THROW(is_graver_element(M, Vec{0, 0}), DomainError);
}

TEST(SignDecomposeTest, Examples) {
  Matrix M = Matrix::from_rows({{3, 4}});
  auto basis = graver_within(M, 8);
  EXPECT_EQ(sign_decompose(M, Vec{8, -6}, basis), (std::vector<Vec>{{4, -3}, {4, -3}}));
  EXPECT_TRUE(sign_decompose(M, Vec{0, 0}, basis).empty());
  Matrix ones = Matrix::from_rows({{1, 1}});
  EXPECT_EQ(sign_decompose(ones, Vec{3, -3}, graver_within(ones, 3)), (std::vector<Vec>(3, Vec{1, -1})));
}

TEST(SignDecomposeTest, IncompleteBasisIsDomainError) {
  Matrix M = Matrix::from_rows({{3, 4}});
  GraverSet empty{M, 1, {}, false};
  EXPECT_THROW(sign_decompose(M, Vec{4, -3}, empty), DomainError);
}

// Properties.

TEST(GraverPropertyTest, MatchesNaiveEnumerationAndIsClosedUnderNegation) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    std::size_t rows = static_cast<std::size_t>(testing::uniform(rng, 1, 2));
    std::size_t cols = static_cast<std::size_t>(testing::uniform(rng, 2, 4));
    std::vector<Vec> r;
    for (std::size_t i = 0; i < rows; ++i) r.push_back(testing::random_vec(rng, cols, -3, 3));
    Matrix M = Matrix::from_rows(r);
    Int radius = cols == 4 ? 3 : 5;
    auto s = graver_within(M, radius);
    std::set<Vec> got(s.elements.begin(), s.elements.end());
    ASSERT_EQ(got, naive_graver(M, radius)) << "matrix " << t;
    for (const auto& g : s.elements) ASSERT_TRUE(got.count(scale(g, -1)));
    for (std::size_t k = 0; k < s.elements.size(); k += 7) ASSERT_TRUE(is_graver_element(M, s.elements[k]));
  }
}

TEST(GraverPropertyTest, SignDecompositionSumsConformally) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 100; ++t) {
    Matrix M = Matrix::from_rows({testing::random_vec(rng, 3, -3, 3)});
    auto pts = kernel_points(M, Vec(3, -4), Vec(3, 4));
    const Vec& x = pts[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<Int>(pts.size()) - 1))];
    auto basis = graver_below(M, x);
    auto parts = sign_decompose(M, x, basis);
    Vec sum(3, 0);
    for (const auto& g : parts) {
      ASSERT_TRUE(conformal_leq(g, x));
      ASSERT_TRUE(is_zero(M.multiply(g)));
      sum = add(sum, g);
    }
    ASSERT_EQ(sum, x);
  }
}

TEST(GraverPropertyTest, TwoStageNormIndependentOfBrickCount) {
  // Values produced by graver_within itself for n = 1 and cross-checked by naive_graver.
  struct Family {
    Vec B, A;
    Int expected;
  };
  for (const auto& f : {Family{{1, -1}, {2, 1}, 2}, Family{{2, 1}, {1, -2}, 2}}) {
    auto norm = naive_graver(two_stage(f.B, f.A, 1), 6);
    Int naive_max = 0;
    for (const auto& g : norm) naive_max = std::max(naive_max, norm_inf(g));
    EXPECT_EQ(naive_max, f.expected);
    for (std::size_t n = 1; n <= 3; ++n) {
      auto s = graver_within(two_stage(f.B, f.A, n), 6);
      Int mx = 0;
      for (const auto& g : s.elements) mx = std::max(mx, norm_inf(g));
      EXPECT_EQ(mx, f.expected) << "n = " << n;
    }
  }
}

}  // namespace
}  // namespace gblocks::graverlab
