// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_BOX_SEARCH_HPP_
#define GBLOCKS_BOX_SEARCH_HPP_

#include <cstdint>
#include <functional>
#include <span>

#include "gblocks/checked.hpp"
#include "gblocks/matrix.hpp"

namespace gblocks {

// 10^8 unless GRAVER_BLOCKS_NODE_CAP is set.
std::uint64_t default_node_cap();

// Visits every integer x with lower ≤ x ≤ upper and M·x = rhs in lexicographic order
// (first coordinate slowest, each coordinate from low to high). Branches are pruned when
// the interval hull of the remaining columns cannot reach the residual. The visitor
// returns false to stop early. Throws ResourceError after `node_cap` search nodes.
// Returns the number of nodes visited.
std::uint64_t for_each_lattice_point(const Matrix& M, std::span<const Int> rhs,
                                     std::span<const Int> lower, std::span<const Int> upper,
                                     const std::function<bool(std::span<const Int>)>& visit,
                                     std::uint64_t node_cap);

}  // namespace gblocks

#endif  // GBLOCKS_BOX_SEARCH_HPP_
