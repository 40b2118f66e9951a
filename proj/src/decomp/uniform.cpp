// SPDX-License-Identifier: Apache-2.0
#include "gblocks/uniform.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "gblocks/partition.hpp"
#include "gblocks/steinitz.hpp"

namespace gblocks::decomp {

namespace {

const Vec& brick_of(const BlockVector& x, std::size_t slot) {
  return slot == 0 ? x.brick0 : x.bricks[slot - 1];
}

Vec& brick_of(BlockVector& x, std::size_t slot) {
  return slot == 0 ? x.brick0 : x.bricks[slot - 1];
}

const Matrix& top_block(const BlockInstance& inst, std::size_t slot) {
  return slot == 0 ? inst.C : inst.D[slot - 1];
}

BlockVector add_blocks(const BlockVector& a, const BlockVector& b) {
  BlockVector out;
  out.brick0 = add(a.brick0, b.brick0);
  for (std::size_t i = 0; i < a.bricks.size(); ++i) out.bricks.push_back(add(a.bricks[i], b.bricks[i]));
  return out;
}

bool local_rows_vanish(const BlockInstance& inst, const BlockVector& x) {
  Vec h = apply(inst, x);
  return std::all_of(h.begin() + static_cast<std::ptrdiff_t>(inst.dims.sC), h.end(),
                     [](Int v) { return v == 0; });
}

std::size_t label_of(std::map<std::vector<Int>, std::size_t>& table, std::vector<Int> key,
                     std::size_t& next) {
  auto [it, inserted] = table.emplace(std::move(key), next);
  if (inserted) ++next;
  return it->second;
}

}  // namespace

std::size_t UniformDecomposition::count(Tier t) const {
  return static_cast<std::size_t>(std::count(tiers.begin(), tiers.end(), t));
}

std::size_t ZoneLabel::zone_count() const {
  return zone.empty() ? 0 : *std::max_element(zone.begin(), zone.end()) + 1;
}

std::size_t ZoneLabel::subzone_count() const {
  return subzone.empty() ? 0 : *std::max_element(subzone.begin(), subzone.end()) + 1;
}

UniformDecomposition uniform_decompose(const BlockInstance& inst, const BlockVector& g,
                                       const graverlab::GraverSet& basis, Int lambda,
                                       std::uint64_t node_cap) {
  if (lambda < 1) throw DomainError("lambda must be positive");
  if (!in_kernel(inst, g)) throw DomainError("vector is not in the kernel of the full matrix");
  RankOneFactor f = coupling_factor(inst.B);
  const Int total = dot(f.r, g.brick0);
  if (total % lambda != 0) throw DomainError("B-value of g is not a multiple of lambda");

  const std::size_t tB = inst.dims.tB, tA = inst.dims.tA, n = inst.dims.n;
  std::vector<Vec> xi = graverlab::sign_decompose(two_stage_matrix(inst), g.flatten(), basis);
  std::vector<Int> values;
  for (const auto& v : xi) values.push_back(dot(f.r, std::span<const Int>(v.data(), tB)));
  Partition groups = xi.empty() ? Partition{} : partition_to_target(values, lambda, node_cap);

  UniformDecomposition dec;
  dec.q = total == 0 ? Vec(inst.dims.sB, 0) : scale(f.v, sign(total) * lambda);
  for (const auto& grp : groups) {
    Vec sum(tB + n * tA, 0);
    for (std::size_t j : grp) sum = add(sum, xi[j]);
    BlockVector part = BlockVector::unflatten(sum, tB, tA, n);
    dec.tiers.push_back(dot(f.r, part.brick0) == 0 ? Tier::kZero : Tier::kOne);
    dec.parts.push_back(std::move(part));
  }
  std::string problem = check_uniform_decomposition(inst, g, dec);
  if (!problem.empty()) throw InternalError("uniform decomposition invalid: " + problem);
  return dec;
}

std::string check_uniform_decomposition(const BlockInstance& inst, const BlockVector& g,
                                        const UniformDecomposition& dec) {
  if (dec.parts.size() != dec.tiers.size()) return "tier list length differs from part count";
  if (dec.q.size() != inst.dims.sB) return "q has the wrong length";
  Vec flat = g.flatten();
  Vec sum(flat.size(), 0);
  for (std::size_t k = 0; k < dec.parts.size(); ++k) {
    const BlockVector& p = dec.parts[k];
    Vec pf = p.flatten();
    if (pf.size() != flat.size()) return "part " + std::to_string(k) + " has the wrong size";
    sum = add(sum, pf);
    if (!conformal_leq(pf, flat)) return "part " + std::to_string(k) + " is not conformal to g";
    if (!local_rows_vanish(inst, p)) return "part " + std::to_string(k) + " leaves the two-stage kernel";
    Vec bq = inst.B.multiply(p.brick0);
    if (dec.tiers[k] == Tier::kZero && !is_zero(bq))
      return "tier-0 part " + std::to_string(k) + " has nonzero B-value";
    if (dec.tiers[k] == Tier::kOne && (bq != dec.q || is_zero(dec.q)))
      return "tier-1 part " + std::to_string(k) + " does not hit q";
  }
  if (sum != flat) return "parts do not sum to g";
  return {};
}

ValueType classify_value(Int x, Int sigma) {
  if (x == 0) return ValueType::kZero;
  if (x > 0) return x <= sigma ? ValueType::kClosePositive : ValueType::kFarPositive;
  return x >= -sigma ? ValueType::kCloseNegative : ValueType::kFarNegative;
}

ZoneLabel classify_zones(const BlockInstance& inst, const BlockVector& g, Int sigma) {
  if (sigma < 1) throw DomainError("sigma must be positive");
  const std::size_t n = inst.dims.n;
  ZoneLabel z;
  z.megazone.assign(n + 1, 0);
  z.zone.assign(n + 1, 0);
  z.subzone.assign(n + 1, 0);
  std::vector<std::pair<const Matrix*, const Matrix*>> pairs;
  std::map<std::vector<Int>, std::size_t> zones, subzones;
  std::size_t next_zone = 1, next_subzone = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t mz = 0;
    for (std::size_t k = 0; k < pairs.size() && mz == 0; ++k)
      if (*pairs[k].first == inst.A[i - 1] && *pairs[k].second == inst.D[i - 1]) mz = k + 1;
    if (mz == 0) {
      pairs.emplace_back(&inst.A[i - 1], &inst.D[i - 1]);
      mz = pairs.size();
    }
    z.megazone[i] = mz;
    std::vector<Int> type_key{static_cast<Int>(mz)};
    std::vector<Int> sub_key;
    for (Int v : g.bricks[i - 1]) {
      type_key.push_back(static_cast<Int>(classify_value(v, sigma)));
      sub_key.push_back(std::clamp(v, -sigma - 1, sigma + 1));
    }
    z.zone[i] = label_of(zones, type_key, next_zone);
    sub_key.insert(sub_key.begin(), static_cast<Int>(z.zone[i]));
    z.subzone[i] = label_of(subzones, sub_key, next_subzone);
  }
  return z;
}

bool is_valid_extraction(const BlockInstance& inst, const BlockVector& g, const BlockVector& eta) {
  Vec e = eta.flatten();
  return !is_zero(e) && conformal_leq(e, g.flatten()) && in_kernel(inst, eta);
}

BalanceOutcome balance_and_extract(const BlockInstance& inst, const BlockVector& g,
                                   const UniformDecomposition& dec, const DecompConfig& config) {
  std::string problem = check_uniform_decomposition(inst, g, dec);
  if (!problem.empty()) throw DomainError("invalid uniform decomposition: " + problem);
  BalanceOutcome out;
  out.tier0 = dec.count(Tier::kZero);
  out.tier1 = dec.count(Tier::kOne);
  out.decomposition = dec;
  if (dec.parts.empty() || out.tier0 == 0) return out;

  if (out.tier1 > 0 && static_cast<Int>(out.tier0) <= checked_mul(config.omega, static_cast<Int>(out.tier1))) {
    std::vector<std::size_t> ones;
    for (std::size_t k = 0; k < dec.parts.size(); ++k)
      if (dec.tiers[k] == Tier::kOne) ones.push_back(k);
    UniformDecomposition folded;
    folded.q = dec.q;
    for (std::size_t k : ones) folded.parts.push_back(dec.parts[k]);
    std::size_t next = 0;
    for (std::size_t k = 0; k < dec.parts.size(); ++k) {
      if (dec.tiers[k] != Tier::kZero) continue;
      BlockVector& target = folded.parts[next++ % ones.size()];
      target = add_blocks(target, dec.parts[k]);
    }
    folded.tiers.assign(folded.parts.size(), Tier::kOne);
    problem = check_uniform_decomposition(inst, g, folded);
    if (!problem.empty()) throw InternalError("folded decomposition invalid: " + problem);
    out.decomposition = std::move(folded);
    return out;
  }

  // Top-row summands D_i·η_j^i (D_0 = C) sum to zero; a zero-sum part made only of
  // tier-0 summands is itself a kernel element.
  const std::size_t n = inst.dims.n;
  std::vector<Vec> summands;
  std::vector<std::pair<std::size_t, std::size_t>> origin;  // (part, slot)
  Int zeta = 0;
  for (std::size_t j = 0; j < dec.parts.size(); ++j)
    for (std::size_t i = 0; i <= n; ++i) {
      summands.push_back(top_block(inst, i).multiply(brick_of(dec.parts[j], i)));
      zeta = std::max(zeta, norm_inf(summands.back()));
      origin.emplace_back(j, i);
    }
  Partition parts = merge_partition(summands, zeta);
  out.kind = BalanceOutcome::Kind::kNoExtraction;
  std::optional<BlockVector> fallback;
  for (const auto& part : parts) {
    bool tier0_only = true;
    BlockVector eta = BlockVector::zeros(inst.dims);
    for (std::size_t s : part) {
      auto [j, i] = origin[s];
      if (dec.tiers[j] != Tier::kZero) {
        tier0_only = false;
        break;
      }
      brick_of(eta, i) = add(brick_of(eta, i), brick_of(dec.parts[j], i));
    }
    if (!tier0_only || !is_valid_extraction(inst, g, eta)) continue;
    if (eta == g) {
      if (!fallback) fallback = eta;
      continue;
    }
    out.kind = BalanceOutcome::Kind::kExtracted;
    out.eta = std::move(eta);
    return out;
  }
  if (fallback) {
    out.kind = BalanceOutcome::Kind::kExtracted;
    out.eta = std::move(fallback);
  }
  return out;
}

ExtractionResult extract_kernel_element(const BlockInstance& inst, const BlockVector& g,
                                        const UniformDecomposition& dec,
                                        const DecompConfig& config) {
  std::string problem = check_uniform_decomposition(inst, g, dec);
  if (!problem.empty()) throw DomainError("invalid uniform decomposition: " + problem);
  if (dec.count(Tier::kZero) != 0) throw DomainError("decomposition is not all tier-1");

  ExtractionResult result;
  ExtractionReport& report = result.report;
  const std::size_t n = inst.dims.n, tA = inst.dims.tA;
  report.bad_group_bound = checked_mul(config.sigma, static_cast<Int>(tA));
  if (norm_inf(g.flatten()) <= config.tau || dec.parts.empty()) return result;

  ZoneLabel zl = classify_zones(inst, g, config.sigma);
  const std::size_t zones = zl.zone_count(), subzones = zl.subzone_count();
  std::vector<Int> beta(zones, 0), gamma(subzones, 0);
  for (std::size_t i = 0; i <= n; ++i) {
    ++beta[zl.zone[i]];
    ++gamma[zl.subzone[i]];
  }
  std::vector<std::vector<bool>> critical(zones, std::vector<bool>(tA, false));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t h = 0; h < tA; ++h) {
      ValueType t = classify_value(g.bricks[i - 1][h], config.sigma);
      critical[zl.zone[i]][h] = t == ValueType::kClosePositive || t == ValueType::kCloseNegative;
    }

  // Job (slot i, part j) has id i·N + j.
  const std::size_t N = dec.parts.size();
  const std::size_t jobs = (n + 1) * N;
  std::vector<Vec> summand(jobs);
  std::vector<bool> bad(jobs, false);
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const Vec& b = brick_of(dec.parts[j], i);
      summand[i * N + j] = top_block(inst, i).multiply(b);
      if (i > 0)
        for (std::size_t h = 0; h < tA; ++h)
          if (critical[zl.zone[i]][h] && b[h] != 0) bad[i * N + j] = true;
    }
  auto slot_of = [N](std::size_t job) { return job / N; };

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> remaining(jobs);
  for (std::size_t k = 0; k < jobs; ++k) remaining[k] = k;
  while (!remaining.empty()) {
    Int left = static_cast<Int>(remaining.size() / (n + 1));
    if (left <= config.group_threshold) break;
    std::vector<Vec> vecs;
    std::vector<std::size_t> colors;
    Int zeta = 0;
    for (std::size_t job : remaining) {
      vecs.push_back(summand[job]);
      colors.push_back(zl.zone[slot_of(job)]);
      zeta = std::max(zeta, norm_inf(summand[job]));
    }
    auto window = colorful_subset(vecs, colors, beta, zeta, ColorfulOptions{false});
    if (!window) break;
    if (config.group_size_m > 0 && window->m > config.group_size_m) break;
    std::vector<std::size_t> group;
    std::vector<bool> take(remaining.size(), false);
    for (std::size_t idx : window->subset) {
      take[idx] = true;
      group.push_back(remaining[idx]);
    }
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < remaining.size(); ++k)
      if (!take[k]) rest.push_back(remaining[k]);
    remaining = std::move(rest);
    groups.push_back(std::move(group));
    report.group_m.push_back(window->m);
  }
  report.groups = groups.size();
  report.bad_groups_per_subzone.assign(subzones, 0);

  std::vector<bool> good_group(groups.size(), true);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    std::vector<Int> bad_in(subzones, 0);
    for (std::size_t job : groups[gi])
      if (bad[job]) ++bad_in[zl.subzone[slot_of(job)]];
    for (std::size_t s = 0; s < subzones; ++s)
      if (bad_in[s] > gamma[s]) {
        ++report.bad_groups_per_subzone[s];
        good_group[gi] = false;
      }
  }
  for (std::size_t s = 0; s < subzones; ++s)
    if (static_cast<Int>(report.bad_groups_per_subzone[s]) > report.bad_group_bound)
      throw InternalError("bad groups in a subzone exceed sigma·t_A");

  std::vector<std::vector<std::size_t>> zone_slots(zones);
  for (std::size_t i = 0; i <= n; ++i) zone_slots[zl.zone[i]].push_back(i);

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (!good_group[gi]) continue;
    const Int m = report.group_m[gi];
    BlockVector eta = BlockVector::zeros(inst.dims);
    std::vector<std::vector<std::size_t>> good_jobs(zones), bad_jobs(subzones);
    for (std::size_t job : groups[gi]) {
      std::size_t i = slot_of(job);
      if (i == 0) brick_of(eta, 0) = add(brick_of(eta, 0), brick_of(dec.parts[job % N], 0));
      else if (bad[job]) bad_jobs[zl.subzone[i]].push_back(job);
      else good_jobs[zl.zone[i]].push_back(job);
    }
    bool consistent = true;
    for (std::size_t nu = 1; nu < zones && consistent; ++nu) {
      std::map<std::size_t, std::vector<std::size_t>> assigned;
      std::map<std::size_t, std::size_t> used_in_subzone;
      for (std::size_t slot : zone_slots[nu]) {
        std::size_t s = zl.subzone[slot];
        std::size_t& used = used_in_subzone[s];
        if (used < bad_jobs[s].size()) assigned[slot].push_back(bad_jobs[s][used++]);
      }
      std::size_t next_good = 0;
      for (std::size_t slot : zone_slots[nu]) {
        auto& list = assigned[slot];
        while (static_cast<Int>(list.size()) < m && next_good < good_jobs[nu].size())
          list.push_back(good_jobs[nu][next_good++]);
        if (static_cast<Int>(list.size()) != m) consistent = false;
        for (std::size_t job : list)
          brick_of(eta, slot) = add(brick_of(eta, slot), brick_of(dec.parts[job % N], slot_of(job)));
      }
      for (const auto& [s, used] : used_in_subzone)
        if (used != bad_jobs[s].size()) consistent = false;
      if (next_good != good_jobs[nu].size()) consistent = false;
    }
    if (!consistent) throw InternalError("group does not distribute evenly over its zone");
    if (is_valid_extraction(inst, g, eta)) {
      report.chosen_group = gi;
      result.eta = std::move(eta);
      return result;
    }
    ++report.rejected_good_groups;
  }
  return result;
}

}  // namespace gblocks::decomp
