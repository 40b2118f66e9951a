// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_RANDOM_INSTANCE_HPP_
#define GBLOCKS_RANDOM_INSTANCE_HPP_

#include <cstddef>
#include <random>

#include "gblocks/block_instance.hpp"

namespace gblocks {

struct RandomInstanceSpec {
  std::size_t max_n = 4;
  std::size_t max_tA = 2;
  std::size_t max_tB = 3;
  std::size_t max_sD = 2;
  std::size_t sA = 1;  // brick rows; B gets the same number of rows
  Int entry_bound = 2;
  Int max_bound_width = 5;
  double quadratic_probability = 0.5;
  double planted_probability = 0.7;    // rhs = H·x for a random x in the box
  double degenerate_probability = 0.1; // per coordinate, lower = upper
  Sense sense = Sense::kEqual;
};

// Small random 4-block instance. Multi-row B is drawn as a rank-one product.
BlockInstance random_instance(std::mt19937_64& rng, const RandomInstanceSpec& spec = {});

}  // namespace gblocks

#endif  // GBLOCKS_RANDOM_INSTANCE_HPP_
