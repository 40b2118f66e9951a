// SPDX-License-Identifier: Apache-2.0
#include "gblocks/nfold.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace gblocks::nfold {

namespace {

constexpr Int kInfinity = std::numeric_limits<Int>::max();

// Dense table over an integer box of top-row sums.
struct StateBox {
  Vec lo, hi;
  std::vector<std::size_t> stride;
  std::size_t volume = 0;

  bool contains(std::span<const Int> s) const {
    for (std::size_t r = 0; r < lo.size(); ++r)
      if (s[r] < lo[r] || s[r] > hi[r]) return false;
    return true;
  }
  std::size_t index(std::span<const Int> s) const {
    std::size_t idx = 0;
    for (std::size_t r = 0; r < lo.size(); ++r) idx += static_cast<std::size_t>(s[r] - lo[r]) * stride[r];
    return idx;
  }
};

StateBox make_box(Vec lo, Vec hi, std::uint64_t cap, std::size_t layer) {
  StateBox box{std::move(lo), std::move(hi), {}, 1};
  box.stride.resize(box.lo.size());
  for (std::size_t r = box.lo.size(); r-- > 0;) {
    if (box.lo[r] > box.hi[r]) {
      box.volume = 0;
      return box;
    }
    box.stride[r] = box.volume;
    unsigned __int128 next = static_cast<unsigned __int128>(box.volume) *
                             static_cast<unsigned __int128>(box.hi[r] - box.lo[r] + 1);
    if (next > cap)
      throw ResourceError("n-fold state space at brick " + std::to_string(layer) + " exceeds the cap " +
                          std::to_string(cap) + " (row " + std::to_string(r) + " spans [" +
                          std::to_string(box.lo[r]) + ", " + std::to_string(box.hi[r]) + "])");
    box.volume = static_cast<std::size_t>(next);
  }
  return box;
}

struct Reduced {
  Vec contribution;
  Int cost;
};

// Cheapest candidate per distinct contribution.
std::vector<Reduced> reduce(const std::vector<BrickCandidate>& list) {
  std::map<Vec, Int> best;
  for (const auto& c : list) {
    auto [it, inserted] = best.emplace(c.contribution, c.cost);
    if (!inserted && c.cost < it->second) it->second = c.cost;
  }
  std::vector<Reduced> out;
  out.reserve(best.size());
  for (auto& [k, v] : best) out.push_back({k, v});
  return out;
}

}  // namespace

void validate(const NFoldInstance& inst) {
  const std::size_t sD = inst.top_rhs.size();
  for (std::size_t k = 0; k < inst.bricks.size(); ++k) {
    const Brick& b = inst.bricks[k];
    const std::string tag = "brick " + std::to_string(k);
    const std::size_t w = b.width();
    if (b.upper.size() != w || b.terms.size() != w) throw StructuralError(tag + ": bound/term length mismatch");
    if (b.top.rows() != sD || b.top.cols() != w) throw StructuralError(tag + ": top block has the wrong shape");
    if (b.local.cols() != w && b.local.rows() != 0) throw StructuralError(tag + ": local block has the wrong width");
    if (b.local.rows() != b.local_rhs.size()) throw StructuralError(tag + ": local rhs length mismatch");
    for (std::size_t j = 0; j < w; ++j)
      if (b.lower[j] > b.upper[j]) throw DomainError(tag + ": empty bound interval");
    SeparableObjective(b.terms).validate(b.lower, b.upper);
  }
}

std::vector<BrickCandidate> enumerate_brick_solutions(const Brick& brick, std::uint64_t node_cap) {
  std::vector<BrickCandidate> out;
  Matrix local = brick.local.rows() == 0 ? Matrix(0, brick.width()) : brick.local;
  for_each_lattice_point(
      local, brick.local_rhs, brick.lower, brick.upper,
      [&](std::span<const Int> y) {
        BrickCandidate c;
        c.y.assign(y.begin(), y.end());
        c.contribution = brick.top.multiply(y);
        c.cost = 0;
        for (std::size_t j = 0; j < y.size(); ++j) c.cost = checked_add(c.cost, evaluate_term(brick.terms[j], y[j]));
        out.push_back(std::move(c));
        return true;
      },
      node_cap);
  return out;
}

std::optional<NFoldSolution> solve_candidates(
    const std::vector<const std::vector<BrickCandidate>*>& lists, const Vec& top_rhs,
    const NFoldLimits& limits) {
  const std::size_t K = lists.size();
  const std::size_t sD = top_rhs.size();
  for (const auto* l : lists)
    if (l->empty()) return std::nullopt;

  std::vector<std::vector<Reduced>> reduced(K);
  std::vector<Vec> hull_lo(K, Vec(sD)), hull_hi(K, Vec(sD));
  for (std::size_t k = 0; k < K; ++k) {
    reduced[k] = reduce(*lists[k]);
    for (std::size_t r = 0; r < sD; ++r) {
      hull_lo[k][r] = kInfinity;
      hull_hi[k][r] = -kInfinity;
      for (const auto& c : reduced[k]) {
        if (c.contribution.size() != sD) throw StructuralError("candidate contribution length mismatch");
        hull_lo[k][r] = std::min(hull_lo[k][r], c.contribution[r]);
        hull_hi[k][r] = std::max(hull_hi[k][r], c.contribution[r]);
      }
    }
  }
  // Layer k holds prefix sums after bricks 0..k−1 that can still reach top_rhs.
  std::vector<Vec> pre_lo(K + 1, Vec(sD, 0)), pre_hi(K + 1, Vec(sD, 0));
  std::vector<Vec> suf_lo(K + 1, Vec(sD, 0)), suf_hi(K + 1, Vec(sD, 0));
  for (std::size_t k = 0; k < K; ++k) {
    pre_lo[k + 1] = add(pre_lo[k], hull_lo[k]);
    pre_hi[k + 1] = add(pre_hi[k], hull_hi[k]);
  }
  for (std::size_t k = K; k-- > 0;) {
    suf_lo[k] = add(suf_lo[k + 1], hull_lo[k]);
    suf_hi[k] = add(suf_hi[k + 1], hull_hi[k]);
  }
  std::vector<StateBox> boxes(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    Vec lo(sD), hi(sD);
    for (std::size_t r = 0; r < sD; ++r) {
      lo[r] = std::max(pre_lo[k][r], checked_sub(top_rhs[r], suf_hi[k][r]));
      hi[r] = std::min(pre_hi[k][r], checked_sub(top_rhs[r], suf_lo[k][r]));
    }
    boxes[k] = make_box(std::move(lo), std::move(hi), limits.state_cap, k);
    if (boxes[k].volume == 0) return std::nullopt;
  }

  std::vector<std::vector<Int>> value(K + 1);
  value[K].assign(boxes[K].volume, kInfinity);
  if (!boxes[K].contains(top_rhs)) return std::nullopt;
  value[K][boxes[K].index(top_rhs)] = 0;
  Vec state(sD), next(sD);
  for (std::size_t k = K; k-- > 0;) {
    const StateBox& box = boxes[k];
    const StateBox& nbox = boxes[k + 1];
    value[k].assign(box.volume, kInfinity);
    Vec s = box.lo;
    for (std::size_t idx = 0; idx < box.volume; ++idx) {
      // Mixed-radix walk matching StateBox::index (last row fastest).
      if (idx > 0) {
        for (std::size_t r = sD; r-- > 0;) {
          if (++s[r] <= box.hi[r]) break;
          s[r] = box.lo[r];
        }
      }
      Int best = kInfinity;
      for (const auto& c : reduced[k]) {
        bool inside = true;
        for (std::size_t r = 0; r < sD && inside; ++r) {
          next[r] = s[r] + c.contribution[r];
          inside = next[r] >= nbox.lo[r] && next[r] <= nbox.hi[r];
        }
        if (!inside) continue;
        Int tail = value[k + 1][nbox.index(next)];
        if (tail == kInfinity) continue;
        Int total = checked_add(c.cost, tail);
        if (total < best) best = total;
      }
      value[k][idx] = best;
    }
  }
  Vec origin(sD, 0);
  if (!boxes[0].contains(origin)) return std::nullopt;
  Int optimum = value[0][boxes[0].index(origin)];
  if (optimum == kInfinity) return std::nullopt;

  NFoldSolution sol;
  sol.objective = optimum;
  state = origin;
  Int need = optimum;
  for (std::size_t k = 0; k < K; ++k) {
    const StateBox& nbox = boxes[k + 1];
    const BrickCandidate* pick = nullptr;
    for (const auto& c : *lists[k]) {
      for (std::size_t r = 0; r < sD; ++r) next[r] = state[r] + c.contribution[r];
      if (!nbox.contains(next)) continue;
      Int tail = value[k + 1][nbox.index(next)];
      if (tail == kInfinity || checked_add(c.cost, tail) != need) continue;
      pick = &c;
      break;
    }
    if (pick == nullptr) throw InternalError("n-fold reconstruction lost the optimum");
    sol.bricks.push_back(pick->y);
    state = add(state, pick->contribution);
    need = checked_sub(need, pick->cost);
  }
  return sol;
}

std::optional<NFoldSolution> solve_nfold_exact(const NFoldInstance& inst, const NFoldLimits& limits) {
  validate(inst);
  std::vector<std::vector<BrickCandidate>> lists;
  lists.reserve(inst.bricks.size());
  for (const auto& b : inst.bricks) lists.push_back(enumerate_brick_solutions(b, limits.node_cap));
  std::vector<const std::vector<BrickCandidate>*> ptrs;
  for (const auto& l : lists) ptrs.push_back(&l);
  return solve_candidates(ptrs, inst.top_rhs, limits);
}

std::pair<Vec, Vec> step_bounds(const Vec& lower, const Vec& upper, const Vec& x0, Int rho) {
  if (rho <= 0) throw DomainError("step length must be positive");
  Vec lo(x0.size()), hi(x0.size());
  for (std::size_t j = 0; j < x0.size(); ++j) {
    lo[j] = ceil_div(checked_sub(lower[j], x0[j]), rho);
    hi[j] = floor_div(checked_sub(upper[j], x0[j]), rho);
  }
  return {lo, hi};
}

std::vector<ConvexTerm> step_terms(const SeparableObjective& objective, const Vec& x0, Int rho,
                                   const Vec& lo, const Vec& hi, StepObjective mode) {
  std::vector<ConvexTerm> out;
  out.reserve(x0.size());
  for (std::size_t j = 0; j < x0.size(); ++j) {
    const ConvexTerm& f = objective.term(j);
    if (mode == StepObjective::kLinear) {
      const auto* lin = std::get_if<LinearTerm>(&f);
      if (lin == nullptr) throw DomainError("linear step mode needs a linear objective");
      out.emplace_back(*lin);
    } else if (const auto* lin = std::get_if<LinearTerm>(&f)) {
      out.emplace_back(LinearTerm{checked_mul(lin->slope, rho)});
    } else if (const auto* quad = std::get_if<QuadraticTerm>(&f)) {
      Int a = checked_mul(quad->a, checked_mul(rho, rho));
      Int b = checked_add(checked_mul(checked_mul(2, quad->a), checked_mul(x0[j], rho)),
                          checked_mul(quad->b, rho));
      out.emplace_back(QuadraticTerm{a, b});
    } else {
      TableTerm t{lo[j], {}};
      Int base = evaluate_term(f, x0[j]);
      for (Int y = lo[j]; y <= hi[j]; ++y)
        t.values.push_back(checked_sub(evaluate_term(f, checked_add(x0[j], checked_mul(rho, y))), base));
      out.emplace_back(std::move(t));
    }
  }
  return out;
}

NFoldInstance build_ip_rho_phi(const BlockInstance& inst, const BlockVector& x0, Int rho, Int phi,
                               StepObjective mode) {
  if (rho <= 0) throw DomainError("step length must be positive");
  if (!is_feasible(inst, x0)) throw DomainError("x0 is not feasible");
  const BlockDims& d = inst.dims;
  RankOneFactor f = coupling_factor(inst.B);
  Vec flat = x0.flatten();
  auto [lo, hi] = step_bounds(inst.lower, inst.upper, flat, rho);
  std::vector<ConvexTerm> terms = step_terms(inst.objective, flat, rho, lo, hi, mode);

  auto slice = [](const auto& v, std::size_t from, std::size_t len) {
    using T = std::decay_t<decltype(v)>;
    return T(v.begin() + static_cast<std::ptrdiff_t>(from),
             v.begin() + static_cast<std::ptrdiff_t>(from + len));
  };
  NFoldInstance out;
  out.top_rhs.assign(d.sC, 0);
  Brick b0;
  b0.top = inst.C;
  b0.local = Matrix::from_rows({f.r});
  b0.local_rhs = {phi};
  b0.lower = slice(lo, 0, d.tB);
  b0.upper = slice(hi, 0, d.tB);
  b0.terms = slice(terms, 0, d.tB);
  out.bricks.push_back(std::move(b0));
  Vec local_rhs = scale(f.v, checked_neg(phi));
  for (std::size_t i = 0; i < d.n; ++i) {
    Brick b;
    std::size_t base = d.tB + i * d.tA;
    b.top = inst.D[i];
    b.local = inst.A[i];
    b.local_rhs = local_rhs;
    b.lower = slice(lo, base, d.tA);
    b.upper = slice(hi, base, d.tA);
    b.terms = slice(terms, base, d.tA);
    out.bricks.push_back(std::move(b));
  }
  return out;
}

}  // namespace gblocks::nfold
