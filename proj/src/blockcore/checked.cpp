// SPDX-License-Identifier: Apache-2.0
#include "gblocks/checked.hpp"

#include <numeric>

namespace gblocks {

namespace {

void require_same_length(std::span<const Int> a, std::span<const Int> b) {
  if (a.size() != b.size()) throw StructuralError("vector length mismatch");
}

}  // namespace

Int dot(std::span<const Int> a, std::span<const Int> b) {
  require_same_length(a, b);
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

Vec add(std::span<const Int> a, std::span<const Int> b) {
  require_same_length(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], b[i]);
  return r;
}

Vec sub(std::span<const Int> a, std::span<const Int> b) {
  require_same_length(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_sub(a[i], b[i]);
  return r;
}

Vec scale(std::span<const Int> a, Int factor) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_mul(a[i], factor);
  return r;
}

Int norm_inf(std::span<const Int> a) {
  Int m = 0;
  for (Int v : a) m = std::max(m, checked_abs(v));
  return m;
}

Int norm_1(std::span<const Int> a) {
  Int s = 0;
  for (Int v : a) s = checked_add(s, checked_abs(v));
  return s;
}

bool is_zero(std::span<const Int> a) {
  for (Int v : a)
    if (v != 0) return false;
  return true;
}

bool conformal_leq(std::span<const Int> x, std::span<const Int> y) {
  require_same_length(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    if ((x[i] > 0) != (y[i] > 0) || y[i] == 0) return false;
    if (x[i] > 0 ? x[i] > y[i] : x[i] < y[i]) return false;
  }
  return true;
}

Int gcd_of(std::span<const Int> a) {
  Int g = 0;
  for (Int v : a) g = std::gcd(g, checked_abs(v));
  return g;
}

Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  Int g = std::gcd(a, b);
  return checked_abs(checked_mul(a / g, b));
}

}  // namespace gblocks
