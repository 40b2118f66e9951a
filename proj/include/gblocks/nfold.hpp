// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_NFOLD_HPP_
#define GBLOCKS_NFOLD_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gblocks/block_instance.hpp"
#include "gblocks/box_search.hpp"
#include "gblocks/matrix.hpp"
#include "gblocks/objective.hpp"

namespace gblocks::nfold {

struct Brick {
  Matrix top;    // sD × width
  Matrix local;  // may have zero rows
  Vec local_rhs;
  Vec lower, upper;
  std::vector<ConvexTerm> terms;

  std::size_t width() const { return lower.size(); }
};

// min Σ_k f_k(y_k) s.t. Σ_k top_k·y_k = top_rhs, local_k·y_k = local_rhs_k, bounds.
struct NFoldInstance {
  std::vector<Brick> bricks;
  Vec top_rhs;
};

void validate(const NFoldInstance& instance);

struct BrickCandidate {
  Vec y;
  Vec contribution;  // top·y
  Int cost;
};

// All solutions of the brick's local system inside its box, in lexicographic order.
std::vector<BrickCandidate> enumerate_brick_solutions(const Brick& brick,
                                                      std::uint64_t node_cap = default_node_cap());

struct NFoldLimits {
  std::uint64_t node_cap = default_node_cap();
  std::uint64_t state_cap = 20'000'000;
};

struct NFoldSolution {
  Int objective = 0;
  std::vector<Vec> bricks;
};

// Exact optimum; ties go to the lexicographically smallest concatenated solution.
std::optional<NFoldSolution> solve_nfold_exact(const NFoldInstance& instance,
                                               const NFoldLimits& limits = {});

// The same DP over explicit candidate lists, each sorted lexicographically by y.
std::optional<NFoldSolution> solve_candidates(
    const std::vector<const std::vector<BrickCandidate>*>& lists, const Vec& top_rhs,
    const NFoldLimits& limits = {});

enum class StepObjective { kLinear, kConvex };

// ⌈(l−x0)/ρ⌉ ≤ y ≤ ⌊(u−x0)/ρ⌋ coordinatewise.
std::pair<Vec, Vec> step_bounds(const Vec& lower, const Vec& upper, const Vec& x0, Int rho);

// Linear mode: w_j·y_j. Convex mode: f_j(x0_j + ρ·y_j) − f_j(x0_j) over [lo_j, hi_j].
std::vector<ConvexTerm> step_terms(const SeparableObjective& objective, const Vec& x0, Int rho,
                                   const Vec& lo, const Vec& hi, StepObjective mode);

// Brick 0: top C, local r·y⁰ = φ. Brick i: top D_i, local A_i·y^i = −v·φ. Top rhs 0.
// (B = v·rᵀ as given by coupling_factor.)
NFoldInstance build_ip_rho_phi(const BlockInstance& instance, const BlockVector& x0, Int rho,
                               Int phi, StepObjective mode);

}  // namespace gblocks::nfold

#endif  // GBLOCKS_NFOLD_HPP_
