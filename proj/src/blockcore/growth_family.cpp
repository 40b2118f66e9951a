// SPDX-License-Identifier: Apache-2.0
#include "gblocks/growth_family.hpp"

namespace gblocks {

BlockInstance growth_instance(std::size_t n, Int bound) {
  if (n == 0) throw DomainError("growth family needs n ≥ 1");
  if (bound == 0) bound = static_cast<Int>(11 * n + 11);
  Matrix C = Matrix::from_rows({{-1, -1, -1}});
  Matrix B = Matrix::from_rows({{0, -1, 1}});
  std::vector<Matrix> A(n, Matrix::from_rows({{3, 4}}));
  std::vector<Matrix> D(n, Matrix::from_rows({{5, 3}}));
  std::size_t cols = 3 + 2 * n;
  return make_instance(std::move(C), std::move(B), std::move(A), std::move(D), Vec(1 + n, 0),
                       Vec(cols, -bound), Vec(cols, bound), SeparableObjective::zero(cols));
}

BlockVector growth_witness(std::size_t n) {
  BlockVector g;
  g.brick0 = {1, static_cast<Int>(n) - 1, static_cast<Int>(n)};
  g.bricks.assign(n, Vec{1, -1});
  return g;
}

std::vector<BlockVector> growth_witness_parts(std::size_t n) {
  if (n < 2) throw DomainError("the scaled decomposition needs n ≥ 2");
  std::vector<BlockVector> parts;
  BlockVector first;
  first.brick0 = {0, 0, 11};
  first.bricks.assign(n, Vec{3, -5});
  first.bricks[n - 1] = {7, -8};
  parts.push_back(first);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    BlockVector mid;
    mid.brick0 = {0, 11, 11};
    mid.bricks.assign(n, Vec{0, 0});
    mid.bricks[j] = {8, -6};
    parts.push_back(mid);
  }
  BlockVector last;
  last.brick0 = {11, 0, 0};
  last.bricks.assign(n, Vec{0, 0});
  last.bricks[n - 1] = {4, -3};
  parts.push_back(last);
  return parts;
}

}  // namespace gblocks
