// SPDX-License-Identifier: Apache-2.0
#include "gblocks/partition.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace gblocks::decomp {

namespace {

Int sum_of(const std::vector<Int>& values, const std::vector<std::size_t>& idx) {
  Int s = 0;
  for (std::size_t i : idx) s = checked_add(s, values[i]);
  return s;
}

Int total(const std::vector<Int>& values) {
  Int s = 0;
  for (Int v : values) s = checked_add(s, v);
  return s;
}

std::vector<Vec> as_vectors(const std::vector<Int>& values) {
  std::vector<Vec> out;
  out.reserve(values.size());
  for (Int v : values) out.push_back({v});
  return out;
}

// Replaces each group of indices into `outer` by the union of the referenced parts.
Partition expand(const Partition& groups, const Partition& outer) {
  Partition out;
  for (const auto& g : groups) {
    std::vector<std::size_t> merged;
    for (std::size_t j : g) merged.insert(merged.end(), outer[j].begin(), outer[j].end());
    std::sort(merged.begin(), merged.end());
    out.push_back(std::move(merged));
  }
  return out;
}

// Exact search packing positive `sums` into bins of exactly `target`.
class BinSearch {
 public:
  BinSearch(const std::vector<Int>& sums, Int target, std::uint64_t cap)
      : sums_(sums), target_(target), cap_(cap), order_(sums.size()) {
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return sums_[a] > sums_[b]; });
  }

  std::optional<Partition> run() {
    bins_ = static_cast<std::size_t>(total(sums_) / target_);
    load_.assign(bins_, 0);
    members_.assign(bins_, {});
    if (!place(0)) return std::nullopt;
    for (auto& m : members_) std::sort(m.begin(), m.end());
    return members_;
  }

 private:
  bool place(std::size_t k) {
    if (k == order_.size()) return true;
    if (++nodes_ > cap_) throw ResourceError("grouping search exceeded its node cap");
    std::size_t item = order_[k];
    Int v = sums_[item];
    for (std::size_t b = 0; b < bins_; ++b) {
      if (load_[b] + v > target_) continue;
      // Empty bins are interchangeable; trying the first one suffices.
      bool empty = load_[b] == 0;
      load_[b] += v;
      members_[b].push_back(item);
      if (place(k + 1)) return true;
      load_[b] -= v;
      members_[b].pop_back();
      if (empty) break;
    }
    return false;
  }

  const std::vector<Int>& sums_;
  Int target_;
  std::uint64_t cap_;
  std::vector<std::size_t> order_;
  std::size_t bins_ = 0;
  std::vector<Int> load_;
  Partition members_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<Int> factorial(Int n) {
  Int r = 1;
  for (Int k = 2; k <= n; ++k)
    if (__builtin_mul_overflow(r, k, &r)) return std::nullopt;
  return r;
}

Partition partition_positive(const std::vector<Int>& values, Int zeta) {
  if (zeta < 1) throw DomainError("zeta must be positive");
  for (Int v : values)
    if (v < 1 || v > zeta) throw DomainError("values must lie in [1, zeta]");
  const Int x = total(values);
  if (values.empty()) return {};
  std::optional<Int> F = factorial(zeta + 1);
  if (!F || x % *F != 0)
    throw DomainError("total " + std::to_string(x) + " is not a multiple of (zeta+1)!");
  const Int zf = *F / (zeta + 1);

  Partition regular;
  std::vector<std::size_t> extra;
  for (Int j = 1; j <= zeta; ++j) {
    std::vector<std::size_t> run;
    const std::size_t chunk = static_cast<std::size_t>(zf / j);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] != j) continue;
      run.push_back(i);
      if (run.size() == chunk) {
        regular.push_back(run);
        run.clear();
      }
    }
    extra.insert(extra.end(), run.begin(), run.end());
  }
  const Int a = sum_of(values, extra) / zf;
  const std::size_t absorb = static_cast<std::size_t>(zeta + 1 - a);
  if (regular.size() < absorb) throw InternalError("too few regular groups for the extra group");

  Partition groups;
  std::vector<std::size_t> first = extra;
  for (std::size_t k = 0; k < absorb; ++k) first.insert(first.end(), regular[k].begin(), regular[k].end());
  groups.push_back(first);
  const std::size_t batch = static_cast<std::size_t>(zeta + 1);
  for (std::size_t k = absorb; k < regular.size(); k += batch) {
    std::vector<std::size_t> g;
    for (std::size_t t = k; t < k + batch; ++t) {
      if (t >= regular.size()) throw InternalError("regular groups do not batch evenly");
      g.insert(g.end(), regular[t].begin(), regular[t].end());
    }
    groups.push_back(std::move(g));
  }
  for (auto& g : groups) {
    std::sort(g.begin(), g.end());
    if (sum_of(values, g) != *F) throw InternalError("positive grouping has a wrong sum");
  }
  return groups;
}

Partition partition_signed(const std::vector<Int>& values, Int zeta) {
  if (zeta < 1) throw DomainError("zeta must be positive");
  for (Int v : values)
    if (checked_abs(v) > zeta) throw DomainError("values exceed zeta in absolute value");
  const Int x = total(values);
  const Int zeta2 = checked_add(checked_mul(6, checked_mul(zeta, zeta)), 2 * zeta);
  std::optional<Int> target;
  if (x != 0) {
    target = factorial(zeta2 + 1);
    if (!target || x % *target != 0)
      throw DomainError("total " + std::to_string(x) + " is not a multiple of (6ζ²+2ζ+1)!");
  }
  Partition merged = merge_partition(as_vectors(values), zeta);
  if (x == 0) return merged;

  const Int flip = x > 0 ? 1 : -1;
  std::vector<Int> positive;
  std::vector<std::size_t> positive_part;
  Partition out;
  for (std::size_t j = 0; j < merged.size(); ++j) {
    Int y = flip * sum_of(values, merged[j]);
    if (y > 0) {
      positive.push_back(y);
      positive_part.push_back(j);
    } else {
      out.push_back(merged[j]);
    }
  }
  Partition grouped = partition_positive(positive, zeta2);
  for (auto& g : grouped)
    for (auto& j : g) j = positive_part[j];
  Partition nonzero = expand(grouped, merged);
  nonzero.insert(nonzero.end(), out.begin(), out.end());
  for (const auto& p : nonzero) {
    Int s = sum_of(values, p);
    if (s != 0 && s != flip * *target) throw InternalError("signed grouping has a wrong sum");
  }
  return nonzero;
}

Partition partition_to_target(const std::vector<Int>& values, Int target, std::uint64_t node_cap) {
  if (target < 1) throw DomainError("target must be positive");
  const Int x = total(values);
  if (x % target != 0)
    throw DomainError("total " + std::to_string(x) + " is not a multiple of " + std::to_string(target));
  Int zeta = 1;
  for (Int v : values) zeta = std::max(zeta, checked_abs(v));
  Partition merged = merge_partition(as_vectors(values), zeta);
  if (x == 0) return merged;

  const Int flip = x > 0 ? 1 : -1;
  std::vector<Int> positive;
  std::vector<std::size_t> positive_part;
  Partition zero_parts;
  for (std::size_t j = 0; j < merged.size(); ++j) {
    Int y = flip * sum_of(values, merged[j]);
    if (y > 0) {
      positive.push_back(y);
      positive_part.push_back(j);
    } else {
      zero_parts.push_back(merged[j]);
    }
  }
  Int pzeta = *std::max_element(positive.begin(), positive.end());
  std::optional<Int> unit = factorial(pzeta + 1);
  Partition grouped;
  if (unit && target % *unit == 0) {
    Partition base = partition_positive(positive, pzeta);
    const std::size_t per = static_cast<std::size_t>(target / *unit);
    for (std::size_t k = 0; k < base.size(); k += per) {
      std::vector<std::size_t> g;
      for (std::size_t t = k; t < k + per; ++t) g.insert(g.end(), base[t].begin(), base[t].end());
      grouped.push_back(std::move(g));
    }
  } else {
    BinSearch search(positive, target, node_cap);
    std::optional<Partition> bins = search.run();
    if (!bins) throw DomainError("no grouping of the merged sums into bins of " + std::to_string(target));
    grouped = std::move(*bins);
  }
  for (auto& g : grouped)
    for (auto& j : g) j = positive_part[j];
  Partition out = expand(grouped, merged);
  out.insert(out.end(), zero_parts.begin(), zero_parts.end());
  for (const auto& p : out) {
    Int s = sum_of(values, p);
    if (s != 0 && s != flip * target) throw InternalError("target grouping has a wrong sum");
  }
  return out;
}

}  // namespace gblocks::decomp
