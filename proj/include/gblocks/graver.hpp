// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_GRAVER_HPP_
#define GBLOCKS_GRAVER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "gblocks/box_search.hpp"
#include "gblocks/checked.hpp"
#include "gblocks/matrix.hpp"

namespace gblocks::graverlab {

struct GraverSet {
  Matrix matrix;
  Int radius = 0;
  std::vector<Vec> elements;
  // Every ⊑-minimal kernel element of norm ≤ radius is present. Whether the full
  // basis lies within the radius is not known.
  bool complete_within_radius = false;
};

// Kernel lattice points of `matrix` inside [lower, upper], in lexicographic order.
std::vector<Vec> kernel_points(const Matrix& matrix, std::span<const Int> lower,
                               std::span<const Int> upper,
                               std::uint64_t node_cap = default_node_cap());

// ⊑-minimal nonzero kernel points with ℓ∞-norm ≤ radius, sorted by (norm, lex).
GraverSet graver_within(const Matrix& matrix, Int radius,
                        std::uint64_t node_cap = default_node_cap());

// All Graver elements g ⊑ x. Complete for sign decompositions of x.
GraverSet graver_below(const Matrix& matrix, std::span<const Int> x,
                       std::uint64_t node_cap = default_node_cap());

// Exact: searches {η ⊑ g} for a kernel point other than 0 and g.
bool is_graver_element(const Matrix& matrix, std::span<const Int> g,
                       std::uint64_t node_cap = default_node_cap());

// Greedy sign-compatible decomposition x = Σ g_i with each g_i ⊑ x, taking the first
// fitting basis element each time. Throws DomainError when the basis is incomplete for x.
std::vector<Vec> sign_decompose(const Matrix& matrix, std::span<const Int> x,
                                const GraverSet& basis);

// Keeps the ⊑-minimal nonzero vectors of `points`. Output sorted by (norm, lex).
std::vector<Vec> minimal_elements(std::vector<Vec> points);

}  // namespace gblocks::graverlab

#endif  // GBLOCKS_GRAVER_HPP_
