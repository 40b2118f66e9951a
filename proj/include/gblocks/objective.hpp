// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_OBJECTIVE_HPP_
#define GBLOCKS_OBJECTIVE_HPP_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "gblocks/checked.hpp"

namespace gblocks {

struct LinearTerm {
  Int slope = 0;
  bool operator==(const LinearTerm&) const = default;
};

// a·x² + b·x with a ≥ 0.
struct QuadraticTerm {
  Int a = 0;
  Int b = 0;
  bool operator==(const QuadraticTerm&) const = default;
};

// f(lower + k) = values[k] for k in [0, values.size()).
struct TableTerm {
  Int lower = 0;
  Vec values;
  Int upper() const { return lower + static_cast<Int>(values.size()) - 1; }
  bool operator==(const TableTerm&) const = default;
};

using ConvexTerm = std::variant<LinearTerm, QuadraticTerm, TableTerm>;

// Throws DomainError outside a table's domain.
Int evaluate_term(const ConvexTerm& term, Int x);

bool is_discretely_convex(const TableTerm& table);

// Sum of per-coordinate convex terms plus a constant offset.
class SeparableObjective {
 public:
  SeparableObjective() = default;
  explicit SeparableObjective(std::vector<ConvexTerm> terms, Int offset = 0)
      : terms_(std::move(terms)), offset_(offset) {}

  static SeparableObjective linear(const Vec& slopes, Int offset = 0);
  static SeparableObjective zero(std::size_t size);

  std::size_t size() const { return terms_.size(); }
  const ConvexTerm& term(std::size_t i) const { return terms_[i]; }
  const std::vector<ConvexTerm>& terms() const { return terms_; }
  Int offset() const { return offset_; }

  bool is_linear() const;
  // Slopes of an all-linear objective; throws DomainError otherwise.
  Vec slopes() const;

  Int evaluate(std::span<const Int> x) const;

  // Checks a ≥ 0, table convexity and that tables cover [lower, upper].
  void validate(std::span<const Int> lower, std::span<const Int> upper) const;

  SeparableObjective appended(const std::vector<ConvexTerm>& more) const;

  bool operator==(const SeparableObjective&) const = default;

 private:
  std::vector<ConvexTerm> terms_;
  Int offset_ = 0;
};

}  // namespace gblocks

#endif  // GBLOCKS_OBJECTIVE_HPP_
