// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_SOLVER_HPP_
#define GBLOCKS_SOLVER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gblocks/block_instance.hpp"
#include "gblocks/errors.hpp"
#include "gblocks/nfold.hpp"

namespace gblocks::solver {

struct AugmentationConfig {
  // Empty: every φ value attainable by the brick-0 step box. Otherwise only these values.
  std::optional<std::vector<Int>> explicit_phis;
  std::size_t max_outer_iterations = 1000;
  std::size_t threads = 1;
  nfold::NFoldLimits limits;
};

struct StepRecord {
  Int rho = 0;
  Int phi = 0;
  Int delta = 0;
  bool operator==(const StepRecord&) const = default;
};

struct SolveReport {
  std::size_t iterations = 0;
  std::size_t phase1_iterations = 0;
  std::vector<Int> objective_trace;  // starting objective, then one entry per step
  std::vector<StepRecord> steps;
  std::uint64_t subproblems = 0;
  double wall_seconds = 0.0;
};

// Raised when the iteration cap runs out; carries the partial trace.
class ConvergenceError : public ResourceError {
 public:
  ConvergenceError(const std::string& what, SolveReport report)
      : ResourceError(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

struct Step {
  Int rho = 0;
  Int phi = 0;
  BlockVector y;
  Int delta = 0;  // f(x0 + ρ·y) − f(x0) < 0
};

// Best improving step over ρ = 1, 2, 4, … ≤ ‖u − l‖∞ and all φ; none if x0 is optimal.
// Requires an equality instance and a feasible x0.
std::optional<Step> best_augmentation(const BlockInstance& instance, const BlockVector& x0,
                                      const AugmentationConfig& config = {},
                                      std::uint64_t* subproblems = nullptr);

// Two-phase start: artificial columns absorb the residual of the bound-clamped origin.
std::optional<BlockVector> find_initial_feasible(const BlockInstance& instance,
                                                 const AugmentationConfig& config = {},
                                                 SolveReport* report = nullptr);

struct SolveResult {
  Int objective = 0;
  BlockVector solution;
  SolveReport report;
};

// Augments from x0 until no step improves.
SolveResult augment_from(const BlockInstance& instance, BlockVector x0,
                         const AugmentationConfig& config = {});

// Inequality instances are solved through to_equality and projected back.
std::optional<SolveResult> solve(const BlockInstance& instance, const AugmentationConfig& config = {});

struct OracleResult {
  Int objective = 0;
  BlockVector solution;
};

// Enumerates brick 0 and solves the decoupled bricks exactly for each value.
std::optional<OracleResult> solve_exact_oracle(const BlockInstance& instance,
                                               const nfold::NFoldLimits& limits = {});

}  // namespace gblocks::solver

#endif  // GBLOCKS_SOLVER_HPP_
