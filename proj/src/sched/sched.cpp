// SPDX-License-Identifier: Apache-2.0
#include "gblocks/sched.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "gblocks/errors.hpp"

namespace gblocks::sched {

namespace {

Int max_p(const SchedulingInstance& s, std::size_t j) {
  Int best = 0;
  for (std::size_t i = 0; i < s.m; ++i) best = std::max(best, s.p[i][j]);
  return best;
}

Int cmax_bound(const SchedulingInstance& s) {
  Int total = 0;
  for (std::size_t j = 0; j < s.k; ++j) total = checked_add(total, checked_mul(s.N[j], max_p(s, j)));
  return total;
}

Int lcm_of_times(const SchedulingInstance& s) {
  Int l = 1;
  for (const auto& row : s.p)
    for (Int v : row)
      if (v > 0) l = lcm(l, v);
  return l;
}

Int load(const SchedulingInstance& s, std::size_t i, const Vec& x) { return dot(s.p[i], x); }

}  // namespace

void validate(const SchedulingInstance& s) {
  if (s.m == 0 || s.k == 0) throw DomainError("need at least one machine and one job type");
  if (s.N.size() != s.k) throw DomainError("N must have k entries");
  if (s.p.size() != s.m) throw DomainError("p must have m rows");
  for (const auto& row : s.p) {
    if (row.size() != s.k) throw DomainError("each row of p must have k entries");
    for (Int v : row)
      if (v < 0) throw DomainError("processing times must be nonnegative");
  }
  for (Int v : s.N)
    if (v < 0) throw DomainError("multiplicities must be nonnegative");
  if (s.variant == Variant::kRejection) {
    if (s.u.size() != s.k) throw DomainError("rejection variant needs k rejection costs");
    for (Int v : s.u)
      if (v < 0) throw DomainError("rejection costs must be nonnegative");
  } else {
    if (s.w.size() != s.k) throw DomainError("bicriteria variant needs k weights");
    for (Int v : s.w)
      if (v < 0) throw DomainError("weights must be nonnegative");
    if (s.theta < 0) throw DomainError("theta must be nonnegative");
  }
}

Int scale_factor(const SchedulingInstance& s) {
  return s.variant == Variant::kRejection ? 1 : checked_mul(2, lcm_of_times(s));
}

BlockInstance build_rejection_ip(const SchedulingInstance& s) {
  validate(s);
  if (s.variant != Variant::kRejection) throw DomainError("expected a rejection instance");
  const std::size_t k = s.k;
  Matrix C(k, 1);
  Matrix B = Matrix::from_rows({{-1}});
  std::vector<Matrix> A, D;
  Vec rhs = s.N;
  Vec lower{0}, upper{cmax_bound(s)};
  Vec slopes{1};
  Int offset = 0;
  for (std::size_t j = 0; j < k; ++j) offset = checked_add(offset, checked_mul(s.u[j], s.N[j]));
  for (std::size_t i = 0; i < s.m; ++i) {
    A.push_back(Matrix::from_rows({s.p[i]}));
    D.push_back(Matrix::identity(k));
    rhs.push_back(0);
    for (std::size_t j = 0; j < k; ++j) {
      lower.push_back(0);
      upper.push_back(s.N[j]);
      slopes.push_back(checked_neg(s.u[j]));
    }
  }
  BlockInstance leq = make_instance(std::move(C), std::move(B), std::move(A), std::move(D), std::move(rhs),
                                    std::move(lower), std::move(upper),
                                    SeparableObjective::linear(slopes, offset), Sense::kLessEqual);
  return to_equality(leq);
}

BlockInstance build_bicriteria_ip(const SchedulingInstance& s) {
  validate(s);
  if (s.variant != Variant::kBicriteria) throw DomainError("expected a bicriteria instance");
  const std::size_t k = s.k;
  const std::size_t width = 2 * k + 1;
  const Int L = lcm_of_times(s);
  const Int S = checked_mul(2, L);
  const Int cmax_ub = cmax_bound(s);

  Matrix C(k, 1);
  Matrix B(k + 1, 1);
  B(0, 0) = -1;
  std::vector<Matrix> A, D;
  Vec rhs = s.N;
  Vec lower{0}, upper{cmax_ub};
  std::vector<ConvexTerm> terms{LinearTerm{checked_mul(S, s.theta)}};
  for (std::size_t i = 0; i < s.m; ++i) {
    const Vec& p = s.p[i];
    std::vector<std::size_t> pi = smith_order(s, i);
    Matrix a(k + 1, width);
    for (std::size_t j = 0; j < k; ++j) a(0, j) = p[j];
    a(0, 2 * k) = 1;
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t h = 0; h <= j; ++h) a(1 + j, pi[h]) = p[pi[h]];
      a(1 + j, k + j) = -1;
    }
    Matrix d(k, width);
    for (std::size_t j = 0; j < k; ++j) d(j, j) = 1;
    A.push_back(std::move(a));
    D.push_back(std::move(d));
    for (std::size_t r = 0; r <= k; ++r) rhs.push_back(0);

    for (std::size_t j = 0; j < k; ++j) {
      lower.push_back(0);
      upper.push_back(s.N[j]);
      terms.emplace_back(LinearTerm{checked_mul(L, checked_mul(s.w[j], p[j]))});
    }
    // z_j carries L·(δ_π(j) − δ_π(j+1)); zero-time types sit at z = 0 and get no weight.
    Int prefix_ub = 0;
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t t = pi[j];
      prefix_ub = checked_add(prefix_ub, checked_mul(p[t], s.N[t]));
      Int coef = 0;
      if (p[t] > 0) {
        coef = checked_mul(L / p[t], s.w[t]);
        if (j + 1 < k) coef = checked_sub(coef, checked_mul(L / p[pi[j + 1]], s.w[pi[j + 1]]));
      }
      if (coef < 0) throw InternalError("Smith order produced a negative curvature");
      lower.push_back(0);
      upper.push_back(prefix_ub);
      terms.emplace_back(QuadraticTerm{coef, 0});
    }
    lower.push_back(0);
    upper.push_back(cmax_ub);
    terms.emplace_back(LinearTerm{0});
  }
  return make_instance(std::move(C), std::move(B), std::move(A), std::move(D), std::move(rhs),
                       std::move(lower), std::move(upper), SeparableObjective(std::move(terms)),
                       Sense::kEqual);
}

BlockInstance build_ip(const SchedulingInstance& s) {
  return s.variant == Variant::kRejection ? build_rejection_ip(s) : build_bicriteria_ip(s);
}

std::vector<std::size_t> smith_order(const SchedulingInstance& s, std::size_t machine) {
  const Vec& p = s.p.at(machine);
  std::vector<std::size_t> order(s.k);
  for (std::size_t j = 0; j < s.k; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (p[a] == 0 || p[b] == 0) return p[a] == 0 && p[b] != 0;
    return checked_mul(s.w[a], p[b]) > checked_mul(s.w[b], p[a]);
  });
  return order;
}

Int smith_simulation_cost(const SchedulingInstance& s, std::size_t machine, const Vec& counts) {
  Int t = 0, cost = 0;
  for (std::size_t j : smith_order(s, machine))
    for (Int c = 0; c < counts[j]; ++c) {
      t = checked_add(t, s.p[machine][j]);
      cost = checked_add(cost, checked_mul(s.w[j], t));
    }
  return cost;
}

Int smith_closed_form_cost(const SchedulingInstance& s, std::size_t machine, const Vec& counts) {
  const Vec& p = s.p.at(machine);
  const std::vector<std::size_t> pi = smith_order(s, machine);
  const Int L = lcm_of_times(s);
  Int z = 0, scaled = 0;
  for (std::size_t j = 0; j < s.k; ++j) {
    std::size_t t = pi[j];
    z = checked_add(z, checked_mul(p[t], counts[t]));
    scaled = checked_add(scaled, checked_mul(L, checked_mul(s.w[t], checked_mul(p[t], counts[t]))));
    if (p[t] == 0) continue;
    Int coef = checked_mul(L / p[t], s.w[t]);
    if (j + 1 < s.k) coef = checked_sub(coef, checked_mul(L / p[pi[j + 1]], s.w[pi[j + 1]]));
    scaled = checked_add(scaled, checked_mul(coef, checked_mul(z, z)));
  }
  const Int S = checked_mul(2, L);
  if (scaled % S != 0) throw InternalError("closed-form cost is not integral");
  return scaled / S;
}

Schedule evaluate_schedule(const SchedulingInstance& s, std::vector<Vec> x) {
  Schedule out;
  out.x = std::move(x);
  for (std::size_t i = 0; i < s.m; ++i) out.cmax = std::max(out.cmax, load(s, i, out.x[i]));
  if (s.variant == Variant::kRejection) {
    out.rejected.assign(s.k, 0);
    out.objective = out.cmax;
    for (std::size_t j = 0; j < s.k; ++j) {
      Int placed = 0;
      for (std::size_t i = 0; i < s.m; ++i) placed = checked_add(placed, out.x[i][j]);
      out.rejected[j] = checked_sub(s.N[j], placed);
      if (out.rejected[j] < 0) throw DomainError("more jobs placed than available");
      out.objective = checked_add(out.objective, checked_mul(s.u[j], out.rejected[j]));
    }
  } else {
    out.objective = checked_mul(s.theta, out.cmax);
    for (std::size_t j = 0; j < s.k; ++j) {
      Int placed = 0;
      for (std::size_t i = 0; i < s.m; ++i) placed = checked_add(placed, out.x[i][j]);
      if (placed != s.N[j]) throw DomainError("every job must be placed");
    }
    for (std::size_t i = 0; i < s.m; ++i)
      out.objective = checked_add(out.objective, smith_simulation_cost(s, i, out.x[i]));
  }
  return out;
}

Schedule decode(const SchedulingInstance& s, const BlockVector& solution) {
  BlockInstance ip = build_ip(s);
  if (!is_feasible(ip, solution)) throw DomainError("solution is not feasible for the scheduling IP");
  std::vector<Vec> x;
  for (const auto& b : solution.bricks) x.emplace_back(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(s.k));
  Schedule out = evaluate_schedule(s, std::move(x));
  const Int cmax_var = solution.brick0[0];
  if (cmax_var < out.cmax) throw InternalError("makespan variable below the actual makespan");
  // Recomputed objective with the makespan variable in place of the true makespan.
  const Int weight = s.variant == Variant::kRejection ? 1 : s.theta;
  Int at_var = checked_add(out.objective, checked_mul(weight, checked_sub(cmax_var, out.cmax)));
  if (checked_mul(at_var, scale_factor(s)) != objective_value(ip, solution))
    throw InternalError("IP objective disagrees with the recomputed schedule cost");
  return out;
}

BruteForceResult brute_force_optimum(const SchedulingInstance& s, std::uint64_t cap) {
  validate(s);
  const std::size_t parts = s.m + (s.variant == Variant::kRejection ? 1 : 0);
  std::vector<Vec> x(s.m, Vec(s.k, 0));
  std::uint64_t visited = 0;
  bool found = false;
  BruteForceResult best;

  // Type j, machine i: remaining jobs of type j go to machines i.. (and the rejection pool).
  std::function<void(std::size_t, std::size_t, Int)> rec = [&](std::size_t j, std::size_t i, Int left) {
    if (j == s.k) {
      if (++visited > cap) throw ResourceError("brute-force schedule search exceeds its cap");
      Schedule sch = evaluate_schedule(s, x);
      if (!found || sch.objective < best.objective) {
        found = true;
        best.objective = sch.objective;
        best.schedule = std::move(sch);
      }
      return;
    }
    if (i + 1 == parts) {
      if (i < s.m) x[i][j] = left;  // the last machine takes the rest
      rec(j + 1, 0, j + 1 < s.k ? s.N[j + 1] : 0);
      if (i < s.m) x[i][j] = 0;
      return;
    }
    for (Int c = 0; c <= left; ++c) {
      x[i][j] = c;
      rec(j, i + 1, left - c);
    }
    x[i][j] = 0;
  };
  rec(0, 0, s.N[0]);
  return best;
}

}  // namespace gblocks::sched
