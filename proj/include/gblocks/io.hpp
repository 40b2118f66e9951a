// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_IO_HPP_
#define GBLOCKS_IO_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "gblocks/block_instance.hpp"
#include "gblocks/graver.hpp"
#include "gblocks/sched.hpp"
#include "gblocks/solver.hpp"

namespace gblocks::io {

using Json = nlohmann::ordered_json;

// Schema errors raise DomainError naming the offending field.
Json parse_text(const std::string& text);
Json read_file(const std::string& path);

Vec vec_from(const Json& j, const std::string& field);
std::vector<Vec> rows_from(const Json& j, const std::string& field);
Matrix matrix_from(const Json& j, const std::string& field);
Json to_json(const Matrix& m);

// {kind: "linear", slopes} | {kind: "quadratic", a, b} | {kind: "table", tables: [{lower, values}]}
// | {kind: "separable", terms: [{kind, ...}]}; optional "offset".
SeparableObjective objective_from(const Json& j, std::size_t size);
Json to_json(const SeparableObjective& objective);

// {dims?, C, B, A: [...], D: [...], rhs, lower, upper, objective, constraint_sense}.
BlockInstance instance_from(const Json& j);
Json to_json(const BlockInstance& instance);
Json dims_json(const BlockDims& dims);

BlockVector block_vector_from(const Json& j);
Json to_json(const BlockVector& x);

Json to_json(const solver::SolveReport& report, bool with_wall_time);

// {variant, m, k, N, p, u | w, theta}.
sched::SchedulingInstance scheduling_from(const Json& j);
Json to_json(const sched::SchedulingInstance& instance);
Json to_json(const sched::Schedule& schedule);

Json to_json(const graverlab::GraverSet& set);

}  // namespace gblocks::io

#endif  // GBLOCKS_IO_HPP_
