// SPDX-License-Identifier: Apache-2.0
#include "gblocks/objective.hpp"

#include <string>

namespace gblocks {

Int evaluate_term(const ConvexTerm& term, Int x) {
  if (const auto* lin = std::get_if<LinearTerm>(&term)) return checked_mul(lin->slope, x);
  if (const auto* quad = std::get_if<QuadraticTerm>(&term))
    return checked_add(checked_mul(quad->a, checked_mul(x, x)), checked_mul(quad->b, x));
  const auto& table = std::get<TableTerm>(term);
  if (x < table.lower || x > table.upper())
    throw DomainError("table term evaluated outside its domain at " + std::to_string(x));
  return table.values[static_cast<std::size_t>(x - table.lower)];
}

bool is_discretely_convex(const TableTerm& table) {
  for (std::size_t k = 2; k < table.values.size(); ++k) {
    Int d1 = checked_sub(table.values[k - 1], table.values[k - 2]);
    Int d2 = checked_sub(table.values[k], table.values[k - 1]);
    if (d2 < d1) return false;
  }
  return true;
}

SeparableObjective SeparableObjective::linear(const Vec& slopes, Int offset) {
  std::vector<ConvexTerm> terms;
  terms.reserve(slopes.size());
  for (Int s : slopes) terms.emplace_back(LinearTerm{s});
  return SeparableObjective(std::move(terms), offset);
}

SeparableObjective SeparableObjective::zero(std::size_t size) {
  return SeparableObjective(std::vector<ConvexTerm>(size, LinearTerm{0}));
}

bool SeparableObjective::is_linear() const {
  for (const auto& t : terms_)
    if (!std::holds_alternative<LinearTerm>(t)) return false;
  return true;
}

Vec SeparableObjective::slopes() const {
  Vec out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    const auto* lin = std::get_if<LinearTerm>(&t);
    if (lin == nullptr) throw DomainError("objective is not linear");
    out.push_back(lin->slope);
  }
  return out;
}

Int SeparableObjective::evaluate(std::span<const Int> x) const {
  if (x.size() != terms_.size()) throw StructuralError("objective length mismatch");
  Int s = offset_;
  for (std::size_t i = 0; i < x.size(); ++i) s = checked_add(s, evaluate_term(terms_[i], x[i]));
  return s;
}

void SeparableObjective::validate(std::span<const Int> lower, std::span<const Int> upper) const {
  if (lower.size() != terms_.size() || upper.size() != terms_.size())
    throw StructuralError("objective has " + std::to_string(terms_.size()) +
                          " terms but there are " + std::to_string(lower.size()) + " variables");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (const auto* quad = std::get_if<QuadraticTerm>(&terms_[i])) {
      if (quad->a < 0) throw DomainError("quadratic term with negative leading coefficient");
    } else if (const auto* table = std::get_if<TableTerm>(&terms_[i])) {
      if (table->values.empty() || table->lower > lower[i] || table->upper() < upper[i])
        throw DomainError("table term does not cover the bounds of variable " +
                          std::to_string(i));
      if (!is_discretely_convex(*table))
        throw DomainError("table term of variable " + std::to_string(i) + " is not convex");
    }
  }
}

SeparableObjective SeparableObjective::appended(const std::vector<ConvexTerm>& more) const {
  std::vector<ConvexTerm> terms = terms_;
  terms.insert(terms.end(), more.begin(), more.end());
  return SeparableObjective(std::move(terms), offset_);
}

}  // namespace gblocks
