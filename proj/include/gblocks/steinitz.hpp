// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_STEINITZ_HPP_
#define GBLOCKS_STEINITZ_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "gblocks/checked.hpp"

namespace gblocks::decomp {

using Partition = std::vector<std::vector<std::size_t>>;

// Order π such that ‖Σ_{i≤ℓ} x_π(i) − ((ℓ−d)/m)·x‖∞ ≤ d·ζ for every prefix ℓ, where x is
// the total. Built by shrinking a chain of fractional weightings with exact rationals.
// Throws DomainError if some ‖x_i‖∞ > ζ.
std::vector<std::size_t> steinitz_permutation(const std::vector<Vec>& vectors, Int zeta);

// Largest prefix deviation of `order`, scaled by m: max_ℓ ‖m·P_ℓ − (ℓ−d)·x‖∞.
Int steinitz_scaled_deviation(const std::vector<Vec>& vectors,
                              const std::vector<std::size_t>& order);

struct MergeOptions {
  // Largest admissible part size for d > 1.
  std::size_t size_cap = std::numeric_limits<std::size_t>::max();
};

// Partition of the indices into parts T_j with Σ_{i∈T_j} x_i ⊑ x.
// For d = 1 parts have at most 2ζ elements (within 6ζ+2).
// Throws ResourceError when a part exceeds options.size_cap.
Partition merge_partition(const std::vector<Vec>& vectors, Int zeta,
                          const MergeOptions& options = {});

struct ColorfulOptions {
  // When set, the size precondition on M is enforced; otherwise the construction runs
  // and reports failure by returning nullopt.
  bool strict = true;
};

struct ColorfulResult {
  std::vector<std::size_t> subset;  // sorted indices
  Int m = 0;                        // subset holds alphas[c]·m vectors of color c
};

// Subset with alphas[c]·m vectors of each color c summing to zero.
// Input: color c occurs alphas[c]·m̄ times and the vectors sum to zero.
std::optional<ColorfulResult> colorful_subset(const std::vector<Vec>& vectors,
                                              const std::vector<std::size_t>& colors,
                                              const std::vector<Int>& alphas, Int zeta,
                                              const ColorfulOptions& options = {});

// (2dζ+2μζ+1)^{d+μ}, saturating at the largest Int.
Int colorful_window_bound(std::size_t d, std::size_t mu, Int zeta);

}  // namespace gblocks::decomp

#endif  // GBLOCKS_STEINITZ_HPP_
