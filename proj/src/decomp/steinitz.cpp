// SPDX-License-Identifier: Apache-2.0
#include "gblocks/steinitz.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace gblocks::decomp {

namespace {

std::size_t common_dimension(const std::vector<Vec>& vectors) {
  std::size_t d = vectors.empty() ? 0 : vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != d) throw StructuralError("vectors have different dimensions");
  return d;
}

void check_norms(const std::vector<Vec>& vectors, Int zeta) {
  if (zeta < 0) throw DomainError("zeta must be nonnegative");
  for (std::size_t i = 0; i < vectors.size(); ++i)
    if (norm_inf(vectors[i]) > zeta)
      throw DomainError("vector " + std::to_string(i) + " exceeds the norm bound " +
                        std::to_string(zeta));
}

Vec total_of(const std::vector<Vec>& vectors, std::size_t d) {
  Vec total(d, 0);
  for (const auto& v : vectors) total = add(total, v);
  return total;
}

// A nonzero w with Σ w_i = 0 and Σ w_i·x_i = 0 over the given d+2 indices.
std::vector<mpq_class> dependency(const std::vector<Vec>& vectors,
                                  const std::vector<std::size_t>& cols, std::size_t d) {
  const std::size_t rows = d + 1;
  const std::size_t n = cols.size();
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(n));
  for (std::size_t c = 0; c < n; ++c) {
    a[0][c] = 1;
    for (std::size_t r = 0; r < d; ++r) a[r + 1][c] = static_cast<long>(vectors[cols[c]][r]);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    mpq_class inv = 1 / a[row][c];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][c] == 0) continue;
      mpq_class f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(c);
    ++row;
  }
  std::size_t free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
  std::vector<mpq_class> w(n, 0);
  w[free_col] = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) w[pivot_col[r]] = -a[r][free_col];
  return w;
}

Int saturating_pow(Int base, std::size_t exp) {
  Int r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) return std::numeric_limits<Int>::max();
  }
  return r;
}

}  // namespace

Int steinitz_scaled_deviation(const std::vector<Vec>& vectors,
                              const std::vector<std::size_t>& order) {
  const std::size_t d = common_dimension(vectors);
  const Int m = static_cast<Int>(vectors.size());
  Vec total = total_of(vectors, d);
  Vec prefix(d, 0);
  Int worst = 0;
  for (std::size_t l = 1; l <= order.size(); ++l) {
    prefix = add(prefix, vectors[order[l - 1]]);
    Int shift = static_cast<Int>(l) - static_cast<Int>(d);
    for (std::size_t r = 0; r < d; ++r)
      worst = std::max(worst, checked_abs(checked_sub(checked_mul(m, prefix[r]),
                                                      checked_mul(shift, total[r]))));
  }
  return worst;
}

std::vector<std::size_t> steinitz_permutation(const std::vector<Vec>& vectors, Int zeta) {
  const std::size_t d = common_dimension(vectors);
  check_norms(vectors, zeta);
  const std::size_t m = vectors.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  if (m <= d) return order;

  // Weights μ on the active set A_k with Σμ = k−d and Σμ·x_i = ((k−d)/m)·x.
  std::vector<mpq_class> mu(m, mpq_class(static_cast<long>(m - d), static_cast<long>(m)));
  for (auto& v : mu) v.canonicalize();
  std::vector<bool> active(m, true);
  for (std::size_t k = m; k > d; --k) {
    mpq_class factor(static_cast<long>(k - 1 - d), static_cast<long>(k - d));
    factor.canonicalize();
    for (std::size_t i = 0; i < m; ++i)
      if (active[i]) mu[i] *= factor;
    while (true) {
      std::vector<std::size_t> frac;
      for (std::size_t i = 0; i < m && frac.size() < d + 2; ++i)
        if (active[i] && mu[i] > 0 && mu[i] < 1) frac.push_back(i);
      if (frac.size() <= d + 1) break;
      std::vector<mpq_class> w = dependency(vectors, frac, d);
      bool have_step = false;
      mpq_class step;
      for (std::size_t c = 0; c < frac.size(); ++c) {
        if (w[c] == 0) continue;
        mpq_class room = w[c] > 0 ? mpq_class((1 - mu[frac[c]]) / w[c]) : mpq_class(-mu[frac[c]] / w[c]);
        if (!have_step || room < step) {
          step = room;
          have_step = true;
        }
      }
      for (std::size_t c = 0; c < frac.size(); ++c) mu[frac[c]] += step * w[c];
    }
    std::size_t drop = m;
    for (std::size_t i = 0; i < m && drop == m; ++i)
      if (active[i] && mu[i] == 0) drop = i;
    if (drop == m) throw InternalError("no zero weight while shrinking the active set");
    active[drop] = false;
    order[k - 1] = drop;
  }
  std::size_t pos = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (active[i]) order[pos++] = i;

  Int bound = checked_mul(checked_mul(static_cast<Int>(m), static_cast<Int>(d)), zeta);
  if (steinitz_scaled_deviation(vectors, order) > bound)
    throw InternalError("rearrangement violates the prefix bound");
  return order;
}

namespace {

Partition merge_scalar(const std::vector<Vec>& vectors) {
  Int total = 0;
  for (const auto& v : vectors) total = checked_add(total, v[0]);
  const Int flip = total < 0 ? -1 : 1;
  Partition parts;
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    Int v = flip * vectors[i][0];
    if (v == 0) parts.push_back({i});
    else if (v > 0) pos.push_back(i);
    else neg.push_back(i);
  }
  // Alternate signs to keep the running sum in (−ζ, ζ]; a repeated running sum closes a
  // zero-sum window.
  std::vector<std::size_t> stack;
  std::vector<Int> prefix{0};
  std::map<Int, std::size_t> depth_of{{0, 0}};
  std::size_t pi = 0, ni = 0;
  while (true) {
    Int s = prefix.back();
    std::size_t next;
    if (s <= 0 && pi < pos.size()) next = pos[pi++];
    else if (s > 0 && ni < neg.size()) next = neg[ni++];
    else break;
    Int t = s + flip * vectors[next][0];
    auto hit = depth_of.find(t);
    if (hit == depth_of.end()) {
      stack.push_back(next);
      prefix.push_back(t);
      depth_of[t] = stack.size();
      continue;
    }
    std::vector<std::size_t> part(stack.begin() + static_cast<std::ptrdiff_t>(hit->second), stack.end());
    part.push_back(next);
    for (std::size_t k = hit->second + 1; k < prefix.size(); ++k) depth_of.erase(prefix[k]);
    stack.resize(hit->second);
    prefix.resize(hit->second + 1);
    parts.push_back(std::move(part));
  }
  if (ni < neg.size()) throw InternalError("negative values left over while merging");
  if (!stack.empty()) parts.push_back(stack);
  for (; pi < pos.size(); ++pi) parts.push_back({pos[pi]});
  return parts;
}

Partition merge_general(const std::vector<Vec>& vectors, Int zeta, std::size_t d) {
  Vec budget = total_of(vectors, d);
  std::vector<std::size_t> order = steinitz_permutation(vectors, zeta);
  Partition parts;
  std::vector<std::size_t> stack;
  for (std::size_t idx : order) {
    stack.push_back(idx);
    Vec suffix(d, 0);
    for (std::size_t len = 1; len <= stack.size(); ++len) {
      suffix = add(suffix, vectors[stack[stack.size() - len]]);
      if (!conformal_leq(suffix, budget)) continue;
      budget = sub(budget, suffix);
      parts.emplace_back(stack.end() - static_cast<std::ptrdiff_t>(len), stack.end());
      stack.resize(stack.size() - len);
      break;
    }
  }
  if (!stack.empty()) parts.push_back(stack);
  return parts;
}

}  // namespace

Partition merge_partition(const std::vector<Vec>& vectors, Int zeta, const MergeOptions& options) {
  const std::size_t d = common_dimension(vectors);
  check_norms(vectors, zeta);
  if (vectors.empty()) return {};
  Partition parts;
  if (d == 0) {
    for (std::size_t i = 0; i < vectors.size(); ++i) parts.push_back({i});
  } else if (d == 1) {
    parts = merge_scalar(vectors);
  } else {
    parts = merge_general(vectors, zeta, d);
  }
  for (auto& p : parts) std::sort(p.begin(), p.end());
  std::sort(parts.begin(), parts.end());

  Vec total = total_of(vectors, d);
  std::vector<bool> seen(vectors.size(), false);
  for (const auto& p : parts) {
    Vec s(d, 0);
    for (std::size_t i : p) {
      if (seen[i]) throw InternalError("index repeated across merge parts");
      seen[i] = true;
      s = add(s, vectors[i]);
    }
    if (!conformal_leq(s, total)) throw InternalError("merge part sum is not conformal to the total");
    if (d == 1 && static_cast<Int>(p.size()) > 6 * zeta + 2)
      throw InternalError("merge part exceeds the scalar size bound");
    if (p.size() > options.size_cap)
      throw ResourceError("merge part of size " + std::to_string(p.size()) +
                          " exceeds the cap " + std::to_string(options.size_cap));
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw InternalError("merge parts do not cover all indices");
  return parts;
}

Int colorful_window_bound(std::size_t d, std::size_t mu, Int zeta) {
  Int base = checked_add(checked_mul(2 * static_cast<Int>(d + mu), std::max<Int>(zeta, 1)), 1);
  return saturating_pow(base, d + mu);
}

std::optional<ColorfulResult> colorful_subset(const std::vector<Vec>& vectors,
                                              const std::vector<std::size_t>& colors,
                                              const std::vector<Int>& alphas, Int zeta,
                                              const ColorfulOptions& options) {
  const std::size_t d = common_dimension(vectors);
  check_norms(vectors, zeta);
  const std::size_t mu = alphas.size();
  const std::size_t M = vectors.size();
  if (colors.size() != M) throw StructuralError("one color per vector required");
  if (mu == 0) throw DomainError("at least one color required");
  Int alpha = 0;
  for (Int a : alphas) {
    if (a <= 0) throw DomainError("color weights must be positive");
    alpha = checked_add(alpha, a);
  }
  std::vector<Int> count(mu, 0);
  for (std::size_t c : colors) {
    if (c >= mu) throw DomainError("color index out of range");
    ++count[c];
  }
  if (count[0] % alphas[0] != 0) throw DomainError("color counts are not proportional to the weights");
  const Int mbar = count[0] / alphas[0];
  for (std::size_t c = 0; c < mu; ++c)
    if (count[c] != checked_mul(alphas[c], mbar))
      throw DomainError("color counts are not proportional to the weights");
  if (!is_zero(total_of(vectors, d))) throw DomainError("vectors must sum to zero");

  const Int window = colorful_window_bound(d, mu, zeta);
  if (options.strict) {
    Int need = window;
    bool big = __builtin_mul_overflow(need, alpha, &need) ||
               __builtin_add_overflow(need, alpha + static_cast<Int>(d + mu), &need);
    if (big || static_cast<Int>(M) <= need)
      throw DomainError("too few vectors for the colorful window guarantee");
  }
  if (M == 0) return std::nullopt;

  const Int lift_zeta = std::max<Int>(zeta, 1);
  const std::size_t D = d + mu;
  std::vector<Vec> lifted(M, Vec(D, 0));
  for (std::size_t i = 0; i < M; ++i) {
    std::copy(vectors[i].begin(), vectors[i].end(), lifted[i].begin());
    lifted[i][d + colors[i]] = 1;
  }
  std::vector<std::size_t> order = steinitz_permutation(lifted, lift_zeta);

  std::map<Vec, Int> first_seen;
  Vec prefix(D, 0);
  std::size_t taken = 0;
  for (Int k = 0;; ++k) {
    const std::size_t lk = static_cast<std::size_t>(k * alpha) + D;
    if (lk > M) break;
    while (taken < lk) prefix = add(prefix, lifted[order[taken++]]);
    Vec z = prefix;
    for (std::size_t c = 0; c < mu; ++c) z[d + c] = checked_sub(z[d + c], checked_mul(k, alphas[c]));
    auto [it, inserted] = first_seen.emplace(z, k);
    if (inserted) continue;
    const Int k1 = it->second;
    const std::size_t from = static_cast<std::size_t>(k1 * alpha) + D;
    ColorfulResult result;
    result.m = k - k1;
    result.subset.assign(order.begin() + static_cast<std::ptrdiff_t>(from),
                         order.begin() + static_cast<std::ptrdiff_t>(lk));
    std::sort(result.subset.begin(), result.subset.end());

    std::vector<Int> got(mu, 0);
    Vec sum(d, 0);
    for (std::size_t i : result.subset) {
      ++got[colors[i]];
      sum = add(sum, vectors[i]);
    }
    for (std::size_t c = 0; c < mu; ++c)
      if (got[c] != checked_mul(alphas[c], result.m))
        throw InternalError("colorful window has the wrong color counts");
    if (!is_zero(sum)) throw InternalError("colorful window does not sum to zero");
    if (result.m > window) throw InternalError("colorful window exceeds its size bound");
    return result;
  }
  if (options.strict) throw InternalError("no repeated prefix residual despite the size guarantee");
  // Too few vectors for a repeat; the whole family still qualifies when it is small enough.
  if (mbar == 0 || mbar > window) return std::nullopt;
  ColorfulResult whole;
  whole.m = mbar;
  whole.subset.resize(M);
  std::iota(whole.subset.begin(), whole.subset.end(), std::size_t{0});
  return whole;
}

}  // namespace gblocks::decomp
