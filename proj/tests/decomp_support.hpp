// SPDX-License-Identifier: Apache-2.0
// Checks on rearrangements and partitions, written against the plain definitions.
#ifndef GBLOCKS_TESTS_DECOMP_SUPPORT_HPP_
#define GBLOCKS_TESTS_DECOMP_SUPPORT_HPP_

#include <algorithm>
#include <vector>

#include "gblocks/checked.hpp"
#include "gblocks/matrix.hpp"
#include "gblocks/steinitz.hpp"

namespace gblocks::testing {

inline Vec total(const std::vector<Vec>& v, std::size_t d) {
  Vec s(d, 0);
  for (const auto& x : v) s = add(s, x);
  return s;
}

// ‖m·P_ℓ − (ℓ−d)·x‖∞ ≤ m·d·ζ for every prefix, in integers.
inline bool prefix_bound_holds(const std::vector<Vec>& v, const std::vector<std::size_t>& order, Int zeta) {
  const Int m = static_cast<Int>(v.size());
  const std::size_t d = v.front().size();
  Vec x = total(v, d), prefix(d, 0);
  for (std::size_t l = 1; l <= order.size(); ++l) {
    prefix = add(prefix, v[order[l - 1]]);
    for (std::size_t c = 0; c < d; ++c) {
      Int dev = m * prefix[c] - (static_cast<Int>(l) - static_cast<Int>(d)) * x[c];
      if (checked_abs(dev) > m * static_cast<Int>(d) * zeta) return false;
    }
  }
  return true;
}

inline bool is_permutation_of(const std::vector<std::size_t>& order, std::size_t m) {
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < m; ++i)
    if (i >= sorted.size() || sorted[i] != i) return false;
  return sorted.size() == m;
}

inline bool covers_exactly(const decomp::Partition& p, std::size_t m) {
  std::vector<std::size_t> all;
  for (const auto& part : p) all.insert(all.end(), part.begin(), part.end());
  return is_permutation_of(all, m);
}

inline Vec part_sum(const std::vector<Vec>& v, const std::vector<std::size_t>& part, std::size_t d) {
  Vec s(d, 0);
  for (std::size_t i : part) s = add(s, v[i]);
  return s;
}

inline Int scalar_sum(const std::vector<Int>& v, const std::vector<std::size_t>& part) {
  Int s = 0;
  for (std::size_t i : part) s += v[i];
  return s;
}

}  // namespace gblocks::testing

#endif  // GBLOCKS_TESTS_DECOMP_SUPPORT_HPP_
