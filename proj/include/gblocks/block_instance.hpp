// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_BLOCK_INSTANCE_HPP_
#define GBLOCKS_BLOCK_INSTANCE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gblocks/checked.hpp"
#include "gblocks/matrix.hpp"
#include "gblocks/objective.hpp"

namespace gblocks {

enum class Sense { kEqual, kLessEqual };

struct BlockDims {
  std::size_t sA = 0, sB = 0, sC = 0, sD = 0;
  std::size_t tA = 0, tB = 0, tC = 0, tD = 0;
  std::size_t n = 0;
  Int delta = 0;

  std::size_t rows() const { return sC + n * sA; }
  std::size_t cols() const { return tB + n * tA; }
  bool operator==(const BlockDims&) const = default;
};

// A solution split into brick 0 (length tB) and bricks 1..n (length tA).
struct BlockVector {
  Vec brick0;
  std::vector<Vec> bricks;

  Vec flatten() const;
  static BlockVector unflatten(std::span<const Int> flat, std::size_t tB, std::size_t tA,
                               std::size_t n);
  static BlockVector zeros(const BlockDims& dims);
  bool operator==(const BlockVector&) const = default;
};

// The 4-block matrix
//   [ C  D_1 ... D_n ]
//   [ B  A_1         ]
//   [ :      ...     ]
//   [ B          A_n ]
// with right-hand side, finite bounds and a separable objective.
struct BlockInstance {
  BlockDims dims;
  Matrix C, B;
  std::vector<Matrix> A, D;
  Vec rhs;
  Vec lower, upper;
  SeparableObjective objective;
  Sense sense = Sense::kEqual;

  std::size_t n() const { return dims.n; }
};

// Derives dims and validates everything; throws StructuralError or DomainError.
BlockInstance make_instance(Matrix C, Matrix B, std::vector<Matrix> A, std::vector<Matrix> D,
                            Vec rhs, Vec lower, Vec upper, SeparableObjective objective,
                            Sense sense = Sense::kEqual);

void validate(const BlockInstance& instance);

bool is_combinatorial(const BlockInstance& instance);
bool is_almost_combinatorial(const BlockInstance& instance);

Matrix assemble_full(const BlockInstance& instance);

// H·x computed brick by brick.
Vec apply(const BlockInstance& instance, const BlockVector& x);
// H·x − rhs.
Vec residual(const BlockInstance& instance, const BlockVector& x);
bool in_kernel(const BlockInstance& instance, const BlockVector& x);

bool within_bounds(const BlockInstance& instance, const BlockVector& x);
// Bounds plus H·x = rhs (or ≤ rhs for inequality instances).
bool is_feasible(const BlockInstance& instance, const BlockVector& x);
Int objective_value(const BlockInstance& instance, const BlockVector& x);

Int max_abs_entry(const BlockInstance& instance);

// Rows [B A_1 0 ...; B 0 A_2 ...], i.e. the full matrix without the top block row.
Matrix two_stage_matrix(const BlockInstance& instance);

// Converts H·x ≤ b into equalities by appending, to each brick, one local slack and one
// slack per top row. Requires sB = 1.
BlockInstance to_equality(const BlockInstance& instance);
// Drops the slack coordinates added by to_equality.
BlockVector project_from_equality(const BlockInstance& original, const BlockVector& lifted);
// Splits slacks for an inequality-feasible x; the top-row slack goes to the first brick
// with room. Returns nullopt if x is infeasible or the slack bounds cannot absorb it.
std::optional<BlockVector> lift_to_equality(const BlockInstance& original, const BlockVector& x);

// Rank-one factorization B = v·rᵀ with r primitive and its first nonzero entry positive.
// B = 0 yields r = 0, v = 0. Throws StructuralError when rank(B) > 1.
struct RankOneFactor {
  Vec v;  // length sB
  Vec r;  // length tB
};
RankOneFactor factor_rank_one(const Matrix& B);

// Scalar coupling φ = r·x⁰ with B·x⁰ = v·φ. A single-row B is used as is (v = 1);
// otherwise the rank-one factorization.
RankOneFactor coupling_factor(const Matrix& B);

}  // namespace gblocks

#endif  // GBLOCKS_BLOCK_INSTANCE_HPP_
