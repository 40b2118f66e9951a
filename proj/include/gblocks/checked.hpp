// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_CHECKED_HPP_
#define GBLOCKS_CHECKED_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "gblocks/errors.hpp"

namespace gblocks {

using Int = std::int64_t;
using Vec = std::vector<Int>;

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline Int checked_neg(Int a) { return checked_sub(0, a); }

inline Int checked_abs(Int a) { return a < 0 ? checked_neg(a) : a; }

// Floor and ceiling of a / b for b != 0.
inline Int floor_div(Int a, Int b) {
  if (b == 0) throw DomainError("division by zero");
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(Int a, Int b) {
  if (b == 0) throw DomainError("division by zero");
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

inline Int sign(Int a) { return (a > 0) - (a < 0); }

Int dot(std::span<const Int> a, std::span<const Int> b);
Vec add(std::span<const Int> a, std::span<const Int> b);
Vec sub(std::span<const Int> a, std::span<const Int> b);
Vec scale(std::span<const Int> a, Int factor);
Int norm_inf(std::span<const Int> a);
Int norm_1(std::span<const Int> a);
bool is_zero(std::span<const Int> a);

// x ⊑ y: sign-compatible and coordinatewise dominated in absolute value.
bool conformal_leq(std::span<const Int> x, std::span<const Int> y);

Int gcd_of(std::span<const Int> a);
Int lcm(Int a, Int b);

}  // namespace gblocks

#endif  // GBLOCKS_CHECKED_HPP_
