// SPDX-License-Identifier: Apache-2.0
#include "gblocks/random_instance.hpp"

namespace gblocks {

namespace {

Int draw(std::mt19937_64& rng, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

std::size_t draw_size(std::mt19937_64& rng, std::size_t hi) {
  return static_cast<std::size_t>(draw(rng, 1, static_cast<Int>(hi)));
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, Int bound) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = draw(rng, -bound, bound);
  return m;
}

}  // namespace

BlockInstance random_instance(std::mt19937_64& rng, const RandomInstanceSpec& spec) {
  const std::size_t n = draw_size(rng, spec.max_n);
  const std::size_t tA = draw_size(rng, spec.max_tA);
  const std::size_t tB = draw_size(rng, spec.max_tB);
  const std::size_t sD = draw_size(rng, spec.max_sD);
  const Int e = spec.entry_bound;

  Matrix C = random_matrix(rng, sD, tB, e);
  Matrix B;
  if (spec.sA == 1) {
    B = random_matrix(rng, 1, tB, e);
  } else {
    Matrix v = random_matrix(rng, spec.sA, 1, 1);
    Matrix r = random_matrix(rng, 1, tB, e);
    B = Matrix(spec.sA, tB);
    for (std::size_t i = 0; i < spec.sA; ++i)
      for (std::size_t j = 0; j < tB; ++j) B(i, j) = v(i, 0) * r(0, j);
  }
  std::vector<Matrix> A, D;
  for (std::size_t i = 0; i < n; ++i) {
    A.push_back(random_matrix(rng, spec.sA, tA, e));
    D.push_back(random_matrix(rng, sD, tA, e));
  }
  const std::size_t cols = tB + n * tA;
  Vec lower(cols), upper(cols), planted(cols);
  std::bernoulli_distribution degenerate(spec.degenerate_probability);
  for (std::size_t j = 0; j < cols; ++j) {
    Int width = degenerate(rng) ? 0 : draw(rng, 0, spec.max_bound_width);
    lower[j] = draw(rng, -width, 0);
    upper[j] = lower[j] + width;
    planted[j] = draw(rng, lower[j], upper[j]);
  }
  std::bernoulli_distribution quadratic(spec.quadratic_probability);
  std::vector<ConvexTerm> terms;
  const bool use_quadratic = quadratic(rng);
  for (std::size_t j = 0; j < cols; ++j) {
    if (use_quadratic) terms.emplace_back(QuadraticTerm{draw(rng, 0, 2), draw(rng, -3, 3)});
    else terms.emplace_back(LinearTerm{draw(rng, -3, 3)});
  }

  BlockInstance inst = make_instance(std::move(C), std::move(B), std::move(A), std::move(D),
                                     Vec(sD + n * spec.sA, 0), std::move(lower), std::move(upper),
                                     SeparableObjective(std::move(terms)), spec.sense);
  if (std::bernoulli_distribution(spec.planted_probability)(rng)) {
    Vec hx = apply(inst, BlockVector::unflatten(planted, tB, tA, n));
    // Inequality instances get some room above the planted point.
    if (spec.sense == Sense::kLessEqual)
      for (Int& v : hx) v += draw(rng, 0, 2);
    inst.rhs = std::move(hx);
  } else {
    for (Int& v : inst.rhs) v = draw(rng, -3, 3);
  }
  return inst;
}

}  // namespace gblocks
