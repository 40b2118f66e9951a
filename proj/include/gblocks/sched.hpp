// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_SCHED_HPP_
#define GBLOCKS_SCHED_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gblocks/block_instance.hpp"

namespace gblocks::sched {

enum class Variant { kRejection, kBicriteria };

// High-multiplicity input: N[j] jobs of type j, p[i][j] their time on machine i.
struct SchedulingInstance {
  Variant variant = Variant::kRejection;
  std::size_t m = 0, k = 0;
  Vec N;
  std::vector<Vec> p;
  Vec u;          // rejection costs
  Vec w;          // weights
  Int theta = 0;  // weight of the makespan in the bicriteria objective
};

void validate(const SchedulingInstance& instance);

struct Schedule {
  std::vector<Vec> x;  // x[i][j]: jobs of type j on machine i
  Vec rejected;        // rejection variant only
  Int cmax = 0;
  Int objective = 0;
  bool operator==(const Schedule&) const = default;
};

// Variables (C_max | x^i per machine); load and count rows as inequalities, then slacks.
BlockInstance build_rejection_ip(const SchedulingInstance& instance);

// Bricks (x^i, z^i, s^i) with z the Smith-order prefix loads and s the idle time to C_max.
// The objective is the true one multiplied by scale_factor().
BlockInstance build_bicriteria_ip(const SchedulingInstance& instance);

BlockInstance build_ip(const SchedulingInstance& instance);

// 2·lcm of the positive processing times (1 for the rejection variant).
Int scale_factor(const SchedulingInstance& instance);

// Types sorted by nonincreasing w_j / p_ij; zero processing times first, ties by index.
std::vector<std::size_t> smith_order(const SchedulingInstance& instance, std::size_t machine);

// Σ w·C on one machine, job by job in Smith order.
Int smith_simulation_cost(const SchedulingInstance& instance, std::size_t machine, const Vec& counts);
// The same cost from the prefix-load formula.
Int smith_closed_form_cost(const SchedulingInstance& instance, std::size_t machine, const Vec& counts);

// Objective of explicit counts with C_max the actual maximum load.
Schedule evaluate_schedule(const SchedulingInstance& instance, std::vector<Vec> x);

// Reads counts from an IP solution and recomputes the objective; throws InternalError when
// the IP objective disagrees with the recomputation at the solution's C_max value.
Schedule decode(const SchedulingInstance& instance, const BlockVector& solution);

struct BruteForceResult {
  Int objective = 0;
  Schedule schedule;
};

BruteForceResult brute_force_optimum(const SchedulingInstance& instance,
                                     std::uint64_t cap = 50'000'000);

}  // namespace gblocks::sched

#endif  // GBLOCKS_SCHED_HPP_
