// SPDX-License-Identifier: Apache-2.0
#include "gblocks/graver.hpp"

#include <algorithm>
#include <string>

namespace gblocks::graverlab {

namespace {

bool norm_lex_less(const Vec& a, const Vec& b) {
  Int na = norm_inf(a), nb = norm_inf(b);
  if (na != nb) return na < nb;
  return a < b;
}

struct SignMasks {
  std::vector<std::uint64_t> pos, neg;
};

SignMasks masks_of(const Vec& v) {
  std::size_t words = (v.size() + 63) / 64;
  SignMasks m{std::vector<std::uint64_t>(words, 0), std::vector<std::uint64_t>(words, 0)};
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0) m.pos[i / 64] |= std::uint64_t{1} << (i % 64);
    if (v[i] < 0) m.neg[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return m;
}

bool masks_fit(const SignMasks& small, const SignMasks& big) {
  for (std::size_t w = 0; w < small.pos.size(); ++w)
    if ((small.pos[w] & ~big.pos[w]) != 0 || (small.neg[w] & ~big.neg[w]) != 0) return false;
  return true;
}

void conformal_box(std::span<const Int> x, Vec& lower, Vec& upper) {
  lower.resize(x.size());
  upper.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lower[i] = std::min<Int>(0, x[i]);
    upper[i] = std::max<Int>(0, x[i]);
  }
}

}  // namespace

std::vector<Vec> kernel_points(const Matrix& matrix, std::span<const Int> lower,
                               std::span<const Int> upper, std::uint64_t node_cap) {
  std::vector<Vec> out;
  Vec zero(matrix.rows(), 0);
  for_each_lattice_point(
      matrix, zero, lower, upper,
      [&](std::span<const Int> x) {
        out.emplace_back(x.begin(), x.end());
        return true;
      },
      node_cap);
  return out;
}

std::vector<Vec> minimal_elements(std::vector<Vec> points) {
  std::erase_if(points, [](const Vec& v) { return is_zero(v); });
  // Anything strictly below p in ⊑ has smaller ℓ1 norm, so earlier accepted elements
  // are the only possible witnesses against p.
  std::stable_sort(points.begin(), points.end(), [](const Vec& a, const Vec& b) {
    Int na = norm_1(a), nb = norm_1(b);
    if (na != nb) return na < nb;
    return a < b;
  });
  std::vector<Vec> accepted;
  std::vector<SignMasks> accepted_masks;
  for (auto& p : points) {
    SignMasks pm = masks_of(p);
    bool minimal = true;
    for (std::size_t i = 0; i < accepted.size() && minimal; ++i)
      if (masks_fit(accepted_masks[i], pm) && conformal_leq(accepted[i], p)) minimal = false;
    if (minimal) {
      accepted_masks.push_back(std::move(pm));
      accepted.push_back(std::move(p));
    }
  }
  std::sort(accepted.begin(), accepted.end(), norm_lex_less);
  accepted.erase(std::unique(accepted.begin(), accepted.end()), accepted.end());
  return accepted;
}

GraverSet graver_within(const Matrix& matrix, Int radius, std::uint64_t node_cap) {
  if (radius < 1) throw DomainError("radius must be positive");
  Vec lower(matrix.cols(), -radius), upper(matrix.cols(), radius);
  GraverSet set;
  set.matrix = matrix;
  set.radius = radius;
  set.elements = minimal_elements(kernel_points(matrix, lower, upper, node_cap));
  set.complete_within_radius = true;
  return set;
}

GraverSet graver_below(const Matrix& matrix, std::span<const Int> x, std::uint64_t node_cap) {
  Vec lower, upper;
  conformal_box(x, lower, upper);
  GraverSet set;
  set.matrix = matrix;
  set.radius = norm_inf(x);
  set.elements = minimal_elements(kernel_points(matrix, lower, upper, node_cap));
  set.complete_within_radius = false;
  return set;
}

bool is_graver_element(const Matrix& matrix, std::span<const Int> g, std::uint64_t node_cap) {
  if (g.size() != matrix.cols()) throw StructuralError("vector length does not match the matrix");
  if (is_zero(g)) throw DomainError("the zero vector is not a Graver candidate");
  if (!is_zero(matrix.multiply(g))) throw DomainError("vector is not in the kernel");
  Vec lower, upper;
  conformal_box(g, lower, upper);
  Vec zero(matrix.rows(), 0);
  bool found = false;
  for_each_lattice_point(
      matrix, zero, lower, upper,
      [&](std::span<const Int> eta) {
        if (is_zero(eta) || std::equal(eta.begin(), eta.end(), g.begin())) return true;
        found = true;
        return false;
      },
      node_cap);
  return !found;
}

std::vector<Vec> sign_decompose(const Matrix& matrix, std::span<const Int> x,
                                const GraverSet& basis) {
  if (x.size() != matrix.cols()) throw StructuralError("vector length does not match the matrix");
  if (!is_zero(matrix.multiply(x))) throw DomainError("vector is not in the kernel");
  std::vector<Vec> parts;
  Vec rest(x.begin(), x.end());
  while (!is_zero(rest)) {
    const Vec* pick = nullptr;
    for (const auto& g : basis.elements)
      if (conformal_leq(g, rest)) {
        pick = &g;
        break;
      }
    if (pick == nullptr)
      throw DomainError("incomplete basis: no element fits the residual after " +
                        std::to_string(parts.size()) + " parts");
    rest = sub(rest, *pick);
    parts.push_back(*pick);
  }
  return parts;
}

}  // namespace gblocks::graverlab
