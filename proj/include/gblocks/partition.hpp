// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_PARTITION_HPP_
#define GBLOCKS_PARTITION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "gblocks/checked.hpp"
#include "gblocks/steinitz.hpp"

namespace gblocks::decomp {

// n!, or nullopt when it does not fit in Int.
std::optional<Int> factorial(Int n);

// Groups of values in [1, ζ] each summing to exactly (ζ+1)!. Runs of ζ!/j copies of
// value j form regular groups; the residues form one extra group that absorbs enough
// regular groups to reach (ζ+1)!, and the remaining regular groups are batched.
// Throws DomainError if the total is not a multiple of (ζ+1)!.
Partition partition_positive(const std::vector<Int>& values, Int zeta);

// Subsets with sums in {0, sgn(x)·(6ζ²+2ζ+1)!} for |values| ≤ ζ with total x. Merges
// first, then groups the positive merged sums with partition_positive.
// Throws DomainError if x is not a multiple of (6ζ²+2ζ+1)!.
Partition partition_signed(const std::vector<Int>& values, Int zeta);

// Subsets with sums in {0, sgn(x)·target} for any target ≥ 1 dividing x. Uses the
// factorial constructions when target is a multiple of the relevant factorial and an
// exact bin search over merged part sums otherwise.
// Throws DomainError when no grouping exists or ResourceError past `node_cap`.
Partition partition_to_target(const std::vector<Int>& values, Int target,
                              std::uint64_t node_cap = 10'000'000);

}  // namespace gblocks::decomp

#endif  // GBLOCKS_PARTITION_HPP_
