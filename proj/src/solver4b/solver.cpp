// SPDX-License-Identifier: Apache-2.0
#include "gblocks/solver.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <map>
#include <string>
#include <thread>

#include "gblocks/box_search.hpp"

namespace gblocks::solver {

namespace {

using nfold::BrickCandidate;
using CandidateList = std::vector<BrickCandidate>;

Vec slice(const Vec& v, std::size_t from, std::size_t len) {
  return Vec(v.begin() + static_cast<std::ptrdiff_t>(from),
             v.begin() + static_cast<std::ptrdiff_t>(from + len));
}

std::vector<ConvexTerm> slice_terms(const std::vector<ConvexTerm>& v, std::size_t from,
                                    std::size_t len) {
  return std::vector<ConvexTerm>(v.begin() + static_cast<std::ptrdiff_t>(from),
                                 v.begin() + static_cast<std::ptrdiff_t>(from + len));
}

// Rows of `m` selected by `rows`.
Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  std::vector<Vec> out;
  for (std::size_t r : rows) out.emplace_back(m.row(r).begin(), m.row(r).end());
  return Matrix::from_rows(out, m.cols());
}

// Lattice points of {fixed·y = fixed_rhs} in the box, in lexicographic order.
void enumerate_box(const Matrix& top, const Matrix& fixed, const Vec& fixed_rhs, const Vec& lo,
                   const Vec& hi, const std::vector<ConvexTerm>& terms, std::uint64_t node_cap,
                   const std::function<void(BrickCandidate&&)>& sink) {
  for_each_lattice_point(
      fixed, fixed_rhs, lo, hi,
      [&](std::span<const Int> y) {
        BrickCandidate c;
        c.y.assign(y.begin(), y.end());
        c.contribution = top.multiply(y);
        c.cost = 0;
        for (std::size_t j = 0; j < y.size(); ++j) c.cost = checked_add(c.cost, evaluate_term(terms[j], y[j]));
        sink(std::move(c));
        return true;
      },
      node_cap);
}

// Rows of A with v_r = 0 have right-hand side 0 for every φ; the rest determine φ.
struct RowSplit {
  std::vector<std::size_t> fixed, varying;
};

RowSplit split_rows(const Vec& v) {
  RowSplit s;
  for (std::size_t r = 0; r < v.size(); ++r) (v[r] == 0 ? s.fixed : s.varying).push_back(r);
  return s;
}

// φ with A·y = −v·φ on the varying rows, if any.
std::optional<Int> phi_of(const Matrix& A, const RowSplit& split, const Vec& v, const Vec& y) {
  if (split.varying.empty()) return Int{0};
  std::size_t r0 = split.varying.front();
  Int a0 = dot(A.row(r0), y);
  if (a0 % v[r0] != 0) return std::nullopt;
  Int phi = checked_neg(a0 / v[r0]);
  for (std::size_t r : split.varying)
    if (dot(A.row(r), y) != checked_neg(checked_mul(v[r], phi))) return std::nullopt;
  return phi;
}

struct PhiOutcome {
  std::optional<nfold::NFoldSolution> solution;
  std::exception_ptr error;
};

[[noreturn]] void rethrow_with_context(const std::exception_ptr& e, Int rho, Int phi) {
  const std::string ctx = " (rho=" + std::to_string(rho) + ", phi=" + std::to_string(phi) + ")";
  try {
    std::rethrow_exception(e);
  } catch (const OverflowError& err) {
    throw OverflowError(err.what() + ctx);
  } catch (const ResourceError& err) {
    throw ResourceError(err.what() + ctx);
  }
}

void run_parallel(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) job(i);
    });
  for (auto& th : pool) th.join();
}

void check_equality(const BlockInstance& inst) {
  if (inst.sense != Sense::kEqual) throw DomainError("augmentation needs an equality instance");
}

BlockVector clamp_origin(const BlockInstance& inst) {
  Vec x(inst.lower.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp<Int>(0, inst.lower[j], inst.upper[j]);
  return BlockVector::unflatten(x, inst.dims.tB, inst.dims.tA, inst.dims.n);
}

}  // namespace

std::optional<Step> best_augmentation(const BlockInstance& inst, const BlockVector& x0,
                                      const AugmentationConfig& config, std::uint64_t* subproblems) {
  check_equality(inst);
  if (!is_feasible(inst, x0)) throw DomainError("x0 is not feasible");
  const BlockDims& d = inst.dims;
  const RankOneFactor f = coupling_factor(inst.B);
  const RowSplit split = split_rows(f.v);
  const Vec flat = x0.flatten();
  const Int rho_max = std::max<Int>(1, norm_inf(sub(inst.upper, inst.lower)));
  const std::size_t K = d.n + 1;

  std::optional<Step> best;
  for (Int rho = 1; rho <= rho_max; rho = checked_mul(rho, 2)) {
    auto [lo, hi] = nfold::step_bounds(inst.lower, inst.upper, flat, rho);
    std::vector<ConvexTerm> terms =
        nfold::step_terms(inst.objective, flat, rho, lo, hi, nfold::StepObjective::kConvex);

    // Every y of a subproblem appears in exactly one φ bucket per brick.
    std::vector<std::map<Int, CandidateList>> buckets(K);
    try {
      enumerate_box(inst.C, Matrix(0, d.tB), {}, slice(lo, 0, d.tB), slice(hi, 0, d.tB),
                    slice_terms(terms, 0, d.tB), config.limits.node_cap, [&](BrickCandidate&& c) {
                      buckets[0][dot(f.r, c.y)].push_back(std::move(c));
                    });
      for (std::size_t i = 0; i < d.n; ++i) {
        std::size_t base = d.tB + i * d.tA;
        const Matrix fixed = select_rows(inst.A[i], split.fixed);
        enumerate_box(inst.D[i], fixed, Vec(split.fixed.size(), 0), slice(lo, base, d.tA),
                      slice(hi, base, d.tA), slice_terms(terms, base, d.tA), config.limits.node_cap,
                      [&](BrickCandidate&& c) {
                        if (auto phi = phi_of(inst.A[i], split, f.v, c.y))
                          buckets[i + 1][*phi].push_back(std::move(c));
                      });
      }
    } catch (const ResourceError&) {
      rethrow_with_context(std::current_exception(), rho, 0);
    }

    std::vector<Int> phis;
    for (const auto& [phi, list] : buckets[0]) {
      if (config.explicit_phis &&
          std::find(config.explicit_phis->begin(), config.explicit_phis->end(), phi) ==
              config.explicit_phis->end())
        continue;
      bool all = true;
      for (std::size_t k = 1; k < K && all; ++k) all = buckets[k].count(phi) > 0;
      if (all) phis.push_back(phi);
    }

    std::vector<PhiOutcome> outcomes(phis.size());
    run_parallel(phis.size(), config.threads, [&](std::size_t idx) {
      try {
        std::vector<const CandidateList*> lists(K);
        for (std::size_t k = 0; k < K; ++k) lists[k] = &buckets[k].at(phis[idx]);
        outcomes[idx].solution = nfold::solve_candidates(lists, Vec(d.sC, 0), config.limits);
      } catch (...) {
        outcomes[idx].error = std::current_exception();
      }
    });
    if (subproblems != nullptr) *subproblems += phis.size();

    for (std::size_t idx = 0; idx < phis.size(); ++idx) {
      if (outcomes[idx].error) {
        try {
          std::rethrow_exception(outcomes[idx].error);
        } catch (const ResourceError&) {
          rethrow_with_context(outcomes[idx].error, rho, phis[idx]);
        }
      }
      const auto& sol = outcomes[idx].solution;
      if (!sol || sol->objective >= 0) continue;
      if (best && sol->objective >= best->delta) continue;
      Step s;
      s.rho = rho;
      s.phi = phis[idx];
      s.delta = sol->objective;
      s.y.brick0 = sol->bricks[0];
      s.y.bricks.assign(sol->bricks.begin() + 1, sol->bricks.end());
      best = std::move(s);
    }
    if (rho > rho_max / 2) break;
  }
  return best;
}

SolveResult augment_from(const BlockInstance& inst, BlockVector x, const AugmentationConfig& config) {
  check_equality(inst);
  if (config.max_outer_iterations < 1) throw DomainError("max_outer_iterations must be at least 1");
  SolveResult out;
  Int value = objective_value(inst, x);
  out.report.objective_trace.push_back(value);
  for (;;) {
    auto step = best_augmentation(inst, x, config, &out.report.subproblems);
    if (!step) break;
    if (out.report.iterations >= config.max_outer_iterations)
      throw ConvergenceError("augmentation did not converge within " +
                                 std::to_string(config.max_outer_iterations) + " iterations",
                             out.report);
    Vec next = add(x.flatten(), scale(step->y.flatten(), step->rho));
    BlockVector nx = BlockVector::unflatten(next, inst.dims.tB, inst.dims.tA, inst.dims.n);
    Int next_value = objective_value(inst, nx);
    if (!is_feasible(inst, nx) || checked_sub(next_value, value) != step->delta)
      throw InternalError("augmentation step is inconsistent with the instance");
    x = std::move(nx);
    value = next_value;
    ++out.report.iterations;
    out.report.objective_trace.push_back(value);
    out.report.steps.push_back({step->rho, step->phi, step->delta});
  }
  out.objective = value;
  out.solution = std::move(x);
  return out;
}

std::optional<BlockVector> find_initial_feasible(const BlockInstance& inst,
                                                 const AugmentationConfig& config, SolveReport* report) {
  if (inst.sense == Sense::kLessEqual) {
    auto lifted = find_initial_feasible(to_equality(inst), config, report);
    if (!lifted) return std::nullopt;
    return project_from_equality(inst, *lifted);
  }
  validate(inst);
  const BlockDims& d = inst.dims;
  BlockVector x = clamp_origin(inst);
  Vec res = sub(inst.rhs, apply(inst, x));
  if (is_zero(res)) return x;

  // Artificial columns: sC in brick 0 on the top rows, sA per brick on its local rows.
  auto signed_diag = [&](std::size_t from, std::size_t len) {
    Matrix m(len, len);
    for (std::size_t r = 0; r < len; ++r) m(r, r) = sign(res[from + r]);
    return m;
  };
  Matrix C = inst.C.hstack(signed_diag(0, d.sC));
  Matrix B = inst.B.hstack(Matrix(d.sB, d.sC));
  std::vector<Matrix> A, D;
  Vec lower = slice(inst.lower, 0, d.tB), upper = slice(inst.upper, 0, d.tB);
  Vec start = x.brick0;
  Vec slopes(d.tB, 0);
  for (std::size_t r = 0; r < d.sC; ++r) {
    lower.push_back(0);
    upper.push_back(checked_abs(res[r]));
    start.push_back(checked_abs(res[r]));
    slopes.push_back(1);
  }
  for (std::size_t i = 0; i < d.n; ++i) {
    std::size_t row = d.sC + i * d.sA;
    std::size_t base = d.tB + i * d.tA;
    A.push_back(inst.A[i].hstack(signed_diag(row, d.sA)));
    D.push_back(inst.D[i].hstack(Matrix(d.sD, d.sA)));
    for (std::size_t c = 0; c < d.tA; ++c) {
      lower.push_back(inst.lower[base + c]);
      upper.push_back(inst.upper[base + c]);
      start.push_back(x.bricks[i][c]);
      slopes.push_back(0);
    }
    for (std::size_t r = 0; r < d.sA; ++r) {
      lower.push_back(0);
      upper.push_back(checked_abs(res[row + r]));
      start.push_back(checked_abs(res[row + r]));
      slopes.push_back(1);
    }
  }
  BlockInstance phase1 = make_instance(std::move(C), std::move(B), std::move(A), std::move(D), inst.rhs,
                                       std::move(lower), std::move(upper),
                                       SeparableObjective::linear(slopes), Sense::kEqual);
  BlockVector x1 = BlockVector::unflatten(start, phase1.dims.tB, phase1.dims.tA, d.n);
  SolveResult r = augment_from(phase1, std::move(x1), config);
  if (report != nullptr) {
    report->phase1_iterations = r.report.iterations;
    report->subproblems += r.report.subproblems;
  }
  if (r.objective != 0) return std::nullopt;
  BlockVector out;
  out.brick0 = slice(r.solution.brick0, 0, d.tB);
  for (const auto& b : r.solution.bricks) out.bricks.push_back(slice(b, 0, d.tA));
  if (!is_feasible(inst, out)) throw InternalError("phase one returned an infeasible point");
  return out;
}

std::optional<SolveResult> solve(const BlockInstance& inst, const AugmentationConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (inst.sense == Sense::kLessEqual) {
    auto r = solve(to_equality(inst), config);
    if (!r) return std::nullopt;
    r->solution = project_from_equality(inst, r->solution);
    r->objective = objective_value(inst, r->solution);
    return r;
  }
  SolveReport phase1;
  auto x0 = find_initial_feasible(inst, config, &phase1);
  if (!x0) return std::nullopt;
  SolveResult r = augment_from(inst, std::move(*x0), config);
  r.report.phase1_iterations = phase1.phase1_iterations;
  r.report.subproblems += phase1.subproblems;
  r.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::optional<OracleResult> solve_exact_oracle(const BlockInstance& inst, const nfold::NFoldLimits& limits) {
  if (inst.sense == Sense::kLessEqual) {
    auto r = solve_exact_oracle(to_equality(inst), limits);
    if (!r) return std::nullopt;
    r->solution = project_from_equality(inst, r->solution);
    r->objective = objective_value(inst, r->solution);
    return r;
  }
  validate(inst);
  const BlockDims& d = inst.dims;
  const std::vector<ConvexTerm>& terms = inst.objective.terms();

  // B rows that vanish leave the brick's local rhs independent of x⁰.
  std::vector<std::size_t> fixed_rows, varying_rows;
  for (std::size_t r = 0; r < d.sB; ++r) {
    bool zero = true;
    for (Int v : inst.B.row(r)) zero = zero && v == 0;
    (zero ? fixed_rows : varying_rows).push_back(r);
  }
  const Matrix Bvar = select_rows(inst.B, varying_rows);

  std::vector<std::map<Vec, CandidateList>> buckets(d.n);
  std::vector<Matrix> Avar(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    std::size_t base = d.tB + i * d.tA;
    std::size_t row = d.sC + i * d.sA;
    Vec fixed_rhs;
    for (std::size_t r : fixed_rows) fixed_rhs.push_back(inst.rhs[row + r]);
    Avar[i] = select_rows(inst.A[i], varying_rows);
    enumerate_box(inst.D[i], select_rows(inst.A[i], fixed_rows), fixed_rhs, slice(inst.lower, base, d.tA),
                  slice(inst.upper, base, d.tA), slice_terms(terms, base, d.tA), limits.node_cap,
                  [&](BrickCandidate&& c) {
                    Vec key = Avar[i].multiply(c.y);
                    buckets[i][key].push_back(std::move(c));
                  });
  }

  std::optional<OracleResult> best;
  const Vec top_rhs = slice(inst.rhs, 0, d.sC);
  for_each_lattice_point(
      Matrix(0, d.tB), {}, slice(inst.lower, 0, d.tB), slice(inst.upper, 0, d.tB),
      [&](std::span<const Int> x0) {
        Vec bx = Bvar.multiply(x0);
        std::vector<const CandidateList*> lists;
        for (std::size_t i = 0; i < d.n; ++i) {
          Vec key(varying_rows.size());
          for (std::size_t k = 0; k < varying_rows.size(); ++k)
            key[k] = checked_sub(inst.rhs[d.sC + i * d.sA + varying_rows[k]], bx[k]);
          auto it = buckets[i].find(key);
          if (it == buckets[i].end()) return true;
          lists.push_back(&it->second);
        }
        auto sol = nfold::solve_candidates(lists, sub(top_rhs, inst.C.multiply(x0)), limits);
        if (!sol) return true;
        Int value = inst.objective.offset();
        for (std::size_t j = 0; j < d.tB; ++j) value = checked_add(value, evaluate_term(terms[j], x0[j]));
        value = checked_add(value, sol->objective);
        if (!best || value < best->objective) {
          OracleResult r;
          r.objective = value;
          r.solution.brick0.assign(x0.begin(), x0.end());
          r.solution.bricks = std::move(sol->bricks);
          best = std::move(r);
        }
        return true;
      },
      limits.node_cap);
  if (best && (!is_feasible(inst, best->solution) || objective_value(inst, best->solution) != best->objective))
    throw InternalError("oracle produced an inconsistent optimum");
  return best;
}

}  // namespace gblocks::solver
