// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_UNIFORM_HPP_
#define GBLOCKS_UNIFORM_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gblocks/block_instance.hpp"
#include "gblocks/box_search.hpp"
#include "gblocks/graver.hpp"

namespace gblocks::decomp {

struct DecompConfig {
  Int sigma = 16;   // close/faraway threshold
  Int lambda = 1;   // common scalar value of tier-1 parts
  Int omega = 4;    // tier-0 / tier-1 balance ratio
  Int tau = 0;      // extraction is skipped when ‖g‖∞ ≤ tau
  // Groups are formed while more than `group_threshold` parts remain.
  Int group_threshold = 0;
  // Largest admissible group multiplicity m; 0 accepts whatever the window yields.
  Int group_size_m = 0;
  std::uint64_t node_cap = default_node_cap();
};

enum class Tier { kZero, kOne };

struct UniformDecomposition {
  std::vector<BlockVector> parts;
  Vec q;  // B·part⁰ of every tier-1 part
  std::vector<Tier> tiers;

  std::size_t count(Tier t) const;
};

// Decomposes g conformally in the two-stage kernel and groups the pieces so every part
// has r·part⁰ ∈ {0, sgn(r·g⁰)·lambda}, where B = v·rᵀ.
UniformDecomposition uniform_decompose(const BlockInstance& instance, const BlockVector& g,
                                       const graverlab::GraverSet& two_stage_basis, Int lambda,
                                       std::uint64_t node_cap = default_node_cap());

// Empty string when valid, else a description of the first violated invariant.
std::string check_uniform_decomposition(const BlockInstance& instance, const BlockVector& g,
                                        const UniformDecomposition& dec);

// Per-slot labels for slots 0..n, numbered in first-occurrence order. Slot 0 is alone in
// megazone 0, zone 0 and subzone 0.
struct ZoneLabel {
  std::vector<std::size_t> megazone, zone, subzone;
  std::size_t zone_count() const;
  std::size_t subzone_count() const;
};

enum class ValueType { kZero, kClosePositive, kFarPositive, kCloseNegative, kFarNegative };
ValueType classify_value(Int x, Int sigma);

ZoneLabel classify_zones(const BlockInstance& instance, const BlockVector& g, Int sigma);

struct BalanceOutcome {
  enum class Kind { kAllTierOne, kExtracted, kNoExtraction };
  Kind kind = Kind::kAllTierOne;
  std::optional<BlockVector> eta;
  UniformDecomposition decomposition;
  std::size_t tier0 = 0, tier1 = 0;
};

// If tier-0 parts outnumber omega·tier-1 parts, extracts a kernel element from a zero-sum
// merging part of tier-0 top-row summands; otherwise folds tier-0 parts into tier-1 parts.
BalanceOutcome balance_and_extract(const BlockInstance& instance, const BlockVector& g,
                                   const UniformDecomposition& dec, const DecompConfig& config);

struct ExtractionReport {
  std::size_t groups = 0;
  std::vector<Int> group_m;
  std::vector<std::size_t> bad_groups_per_subzone;
  Int bad_group_bound = 0;  // σ·t_A
  std::optional<std::size_t> chosen_group;
  std::size_t rejected_good_groups = 0;  // good groups whose assignment failed ⊑
};

struct ExtractionResult {
  std::optional<BlockVector> eta;
  ExtractionReport report;
};

// Groups the bricks of an all-tier-1 decomposition into zero-sum colorful groups, looks
// for a group with few bad jobs per subzone and reassigns its jobs into η ⊑ g with H·η = 0.
ExtractionResult extract_kernel_element(const BlockInstance& instance, const BlockVector& g,
                                        const UniformDecomposition& dec,
                                        const DecompConfig& config);

// η ≠ 0, η ⊑ g and η in the kernel of the full matrix.
bool is_valid_extraction(const BlockInstance& instance, const BlockVector& g,
                         const BlockVector& eta);

}  // namespace gblocks::decomp

#endif  // GBLOCKS_UNIFORM_HPP_
