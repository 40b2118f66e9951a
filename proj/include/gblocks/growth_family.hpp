// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_GROWTH_FAMILY_HPP_
#define GBLOCKS_GROWTH_FAMILY_HPP_

#include <cstddef>
#include <vector>

#include "gblocks/block_instance.hpp"

namespace gblocks {

// The family C=(−1,−1,−1), D_i=(5,3), B=(0,−1,1), A_i=(3,4) with n bricks, rhs 0,
// bounds [−bound, bound] and zero objective. Its Graver basis contains an element of
// norm n.
BlockInstance growth_instance(std::size_t n, Int bound = 0);

// g = (1, n−1, n, 1, −1, ..., 1, −1).
BlockVector growth_witness(std::size_t n);

// n+1 kernel vectors, each ⊑ 11·g, summing to 11·g.
std::vector<BlockVector> growth_witness_parts(std::size_t n);

}  // namespace gblocks

#endif  // GBLOCKS_GROWTH_FAMILY_HPP_
