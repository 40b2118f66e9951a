// SPDX-License-Identifier: Apache-2.0
// Command-line front end: instance solving, Graver tools, rearrangement and partition constructions, scheduling.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "gblocks/errors.hpp"
#include "gblocks/graver.hpp"
#include "gblocks/growth_family.hpp"
#include "gblocks/io.hpp"
#include "gblocks/partition.hpp"
#include "gblocks/random_instance.hpp"
#include "gblocks/sched.hpp"
#include "gblocks/solver.hpp"
#include "gblocks/steinitz.hpp"
#include "gblocks/uniform.hpp"

namespace {

using gblocks::Int;
using gblocks::Vec;
using gblocks::io::Json;

enum Exit : int { kOk = 0, kNone = 1, kInput = 2, kResource = 3, kInternal = 4 };

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string out;
  Int radius = 0;
  Int sigma = 16;
  Int lambda = 1;
  Int zeta = 0;
  std::size_t max_iters = 1000;
  std::uint64_t node_cap = 0;
  std::size_t threads = 1;
  std::uint64_t seed = 1;
  std::size_t n = 3;
  bool wall_time = false;
  bool certify = false;
  bool brute_force = false;
};

Json config_json(const RunConfig& c) {
  return Json{{"subcommand", c.subcommand}, {"input", c.input},         {"out", c.out},
              {"radius", c.radius},         {"sigma", c.sigma},         {"lambda", c.lambda},
              {"max_iters", c.max_iters},   {"node_cap", c.node_cap},   {"threads", c.threads},
              {"seed", c.seed},             {"n", c.n}};
}

std::uint64_t node_cap(const RunConfig& c) { return c.node_cap ? c.node_cap : gblocks::default_node_cap(); }

gblocks::solver::AugmentationConfig solver_config(const RunConfig& c) {
  gblocks::solver::AugmentationConfig a;
  a.max_outer_iterations = c.max_iters;
  a.threads = c.threads;
  a.limits.node_cap = node_cap(c);
  return a;
}

Json input(const RunConfig& c) {
  if (c.input.empty()) throw gblocks::DomainError("--in is required for '" + c.subcommand + "'");
  return gblocks::io::read_file(c.input);
}

std::vector<std::size_t> sizes_from(const Json& j, const std::string& name) {
  std::vector<std::size_t> out;
  for (Int v : gblocks::io::vec_from(j, name)) {
    if (v < 0) throw gblocks::DomainError("'" + name + "' entries must be nonnegative");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

Json partition_json(const gblocks::decomp::Partition& p) {
  Json out = Json::array();
  for (const auto& part : p) out.push_back(part);
  return out;
}

// {"instance": …} or the instance fields inline.
const Json& field_or_self(const Json& j) { return j.contains("instance") ? j["instance"] : j; }

// Each handler fills `report` and returns an exit status.
using Handler = std::function<int(const RunConfig&, Json& report)>;

int run_solve(const RunConfig& c, Json& report) {
  auto inst = gblocks::io::instance_from(input(c));
  auto r = gblocks::solver::solve(inst, solver_config(c));
  if (!r) {
    report["status"] = "infeasible";
    return kNone;
  }
  report["status"] = "optimal";
  report["objective"] = r->objective;
  report["solution"] = gblocks::io::to_json(r->solution);
  report["report"] = gblocks::io::to_json(r->report, c.wall_time);
  return kOk;
}

int run_oracle(const RunConfig& c, Json& report) {
  auto inst = gblocks::io::instance_from(input(c));
  gblocks::nfold::NFoldLimits limits;
  limits.node_cap = node_cap(c);
  auto r = gblocks::solver::solve_exact_oracle(inst, limits);
  if (!r) {
    report["status"] = "infeasible";
    return kNone;
  }
  report["status"] = "optimal";
  report["objective"] = r->objective;
  report["solution"] = gblocks::io::to_json(r->solution);
  return kOk;
}

gblocks::Matrix matrix_input(const Json& j) {
  if (j.contains("matrix")) return gblocks::io::matrix_from(j, "matrix");
  if (j.contains("instance")) return gblocks::assemble_full(gblocks::io::instance_from(j["instance"]));
  throw gblocks::DomainError("expected 'matrix' or 'instance'");
}

int run_graver(const RunConfig& c, Json& report) {
  Json j = input(c);
  Int radius = c.radius ? c.radius : (j.contains("radius") ? j["radius"].get<Int>() : 0);
  if (radius < 1) throw gblocks::DomainError("radius must be positive");
  auto set = gblocks::graverlab::graver_within(matrix_input(j), radius, node_cap(c));
  report.update(gblocks::io::to_json(set));
  return kOk;
}

int run_check_graver(const RunConfig& c, Json& report) {
  Json j = input(c);
  Vec g = j["g"].is_object() ? gblocks::io::block_vector_from(j["g"]).flatten() : gblocks::io::vec_from(j, "g");
  bool ok = gblocks::graverlab::is_graver_element(matrix_input(j), g, node_cap(c));
  report["is_graver"] = ok;
  report["norm_inf"] = gblocks::norm_inf(g);
  return kOk;
}

int run_decompose(const RunConfig& c, Json& report) {
  using namespace gblocks::decomp;
  Json j = input(c);
  auto inst = gblocks::io::instance_from(field_or_self(j));
  gblocks::BlockVector g = gblocks::io::block_vector_from(j.at("g"));
  gblocks::Matrix ts = gblocks::two_stage_matrix(inst);
  auto basis = c.radius ? gblocks::graverlab::graver_within(ts, c.radius, node_cap(c))
                        : gblocks::graverlab::graver_below(ts, g.flatten(), node_cap(c));
  auto dec = uniform_decompose(inst, g, basis, c.lambda, node_cap(c));
  Json parts = Json::array();
  for (std::size_t k = 0; k < dec.parts.size(); ++k)
    parts.push_back(Json{{"tier", dec.tiers[k] == Tier::kOne ? 1 : 0},
                         {"vector", gblocks::io::to_json(dec.parts[k])}});
  report["q"] = dec.q;
  report["parts"] = parts;
  report["tier0"] = dec.count(Tier::kZero);
  report["tier1"] = dec.count(Tier::kOne);
  report["valid"] = check_uniform_decomposition(inst, g, dec).empty();
  DecompConfig cfg;
  cfg.sigma = c.sigma;
  cfg.lambda = c.lambda;
  cfg.node_cap = node_cap(c);
  auto bal = balance_and_extract(inst, g, dec, cfg);
  static const char* kinds[] = {"all_tier_one", "extracted", "no_extraction"};
  report["balance"] = Json{{"kind", kinds[static_cast<int>(bal.kind)]},
                           {"eta", bal.eta ? gblocks::io::to_json(*bal.eta) : Json()}};
  return kOk;
}

int run_steinitz(const RunConfig& c, Json& report) {
  Json j = input(c);
  auto vectors = gblocks::io::rows_from(j, "vectors");
  Int zeta = c.zeta;
  if (zeta == 0)
    for (const auto& v : vectors) zeta = std::max(zeta, gblocks::norm_inf(v));
  auto order = gblocks::decomp::steinitz_permutation(vectors, zeta);
  std::size_t d = vectors.empty() ? 0 : vectors.front().size();
  report["order"] = order;
  report["zeta"] = zeta;
  report["scaled_deviation"] = gblocks::decomp::steinitz_scaled_deviation(vectors, order);
  report["scaled_bound"] = static_cast<Int>(vectors.size() * d) * zeta;
  return kOk;
}

int run_merge(const RunConfig& c, Json& report) {
  Json j = input(c);
  auto vectors = gblocks::io::rows_from(j, "vectors");
  Int zeta = c.zeta;
  if (zeta == 0)
    for (const auto& v : vectors) zeta = std::max(zeta, gblocks::norm_inf(v));
  auto parts = gblocks::decomp::merge_partition(vectors, zeta);
  std::size_t largest = 0;
  for (const auto& p : parts) largest = std::max(largest, p.size());
  report["zeta"] = zeta;
  report["parts"] = partition_json(parts);
  report["largest_part"] = largest;
  return kOk;
}

int run_colorful(const RunConfig& c, Json& report) {
  Json j = input(c);
  auto vectors = gblocks::io::rows_from(j, "vectors");
  auto colors = sizes_from(j, "colors");
  Vec alphas = gblocks::io::vec_from(j, "alphas");
  Int zeta = c.zeta ? c.zeta : (j.contains("zeta") ? j["zeta"].get<Int>() : 1);
  gblocks::decomp::ColorfulOptions opt;
  opt.strict = j.value("strict", true);
  auto r = gblocks::decomp::colorful_subset(vectors, colors, alphas, zeta, opt);
  if (!r) {
    report["status"] = "none";
    return kNone;
  }
  report["status"] = "found";
  report["subset"] = r->subset;
  report["m"] = r->m;
  return kOk;
}

int run_partition(const RunConfig& c, Json& report) {
  Json j = input(c);
  Vec values = gblocks::io::vec_from(j, "values");
  const std::string mode = j.value("mode", std::string("positive"));
  gblocks::decomp::Partition parts;
  if (mode == "positive") {
    parts = gblocks::decomp::partition_positive(values, j.at("zeta").get<Int>());
  } else if (mode == "signed") {
    parts = gblocks::decomp::partition_signed(values, j.at("zeta").get<Int>());
  } else if (mode == "target") {
    parts = gblocks::decomp::partition_to_target(values, j.at("target").get<Int>(), node_cap(c));
  } else {
    throw gblocks::DomainError("mode must be positive, signed or target");
  }
  Vec sums;
  for (const auto& p : parts) {
    Int s = 0;
    for (std::size_t idx : p) s = gblocks::checked_add(s, values[idx]);
    sums.push_back(s);
  }
  report["parts"] = partition_json(parts);
  report["sums"] = sums;
  return kOk;
}

int run_sched(const RunConfig& c, Json& report, gblocks::sched::Variant variant) {
  auto s = gblocks::io::scheduling_from(input(c));
  if (s.variant != variant) throw gblocks::DomainError("instance variant does not match the subcommand");
  auto ip = gblocks::sched::build_ip(s);
  auto r = gblocks::solver::solve(ip, solver_config(c));
  if (!r) throw gblocks::InternalError("scheduling IP reported infeasible");
  auto schedule = gblocks::sched::decode(s, r->solution);
  report["objective"] = schedule.objective;
  report["schedule"] = gblocks::io::to_json(schedule);
  report["report"] = gblocks::io::to_json(r->report, c.wall_time);
  report["scale"] = gblocks::sched::scale_factor(s);
  if (c.brute_force) {
    auto bf = gblocks::sched::brute_force_optimum(s);
    report["brute_force_objective"] = bf.objective;
  }
  return kOk;
}

int run_verify_example(const RunConfig& c, Json& report) {
  const std::size_t n = c.n;
  if (n < 2) throw gblocks::DomainError("--n must be at least 2");
  auto inst = gblocks::growth_instance(n);
  auto g = gblocks::growth_witness(n);
  bool kernel_ok = gblocks::in_kernel(inst, g);
  auto parts = gblocks::growth_witness_parts(n);
  Vec target = gblocks::scale(g.flatten(), 11);
  Vec sum(target.size(), 0);
  bool decomposition_ok = true;
  for (const auto& p : parts) {
    decomposition_ok = decomposition_ok && gblocks::in_kernel(inst, p) &&
                       gblocks::conformal_leq(p.flatten(), target);
    sum = gblocks::add(sum, p.flatten());
  }
  decomposition_ok = decomposition_ok && sum == target;
  report["n"] = n;
  report["kernel_ok"] = kernel_ok;
  report["decomposition_ok"] = decomposition_ok;
  report["parts"] = parts.size();
  report["norm_inf"] = gblocks::norm_inf(g.flatten());
  if (c.certify) report["is_graver"] = gblocks::graverlab::is_graver_element(
                     gblocks::assemble_full(inst), g.flatten(), node_cap(c));
  return kernel_ok && decomposition_ok ? kOk : kInternal;
}

int run_random_instance(const RunConfig& c, Json& report) {
  std::mt19937_64 rng(c.seed);
  gblocks::RandomInstanceSpec spec;
  spec.max_n = c.n;
  report["instance"] = gblocks::io::to_json(gblocks::random_instance(rng, spec));
  return kOk;
}

void emit(const RunConfig& c, const Json& report) {
  const std::string text = report.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw gblocks::DomainError("cannot write '" + c.out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-structured integer programming toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::map<std::string, std::pair<std::string, Handler>> commands = {
      {"solve", {"augmentation solver on a JSON instance", run_solve}},
      {"oracle", {"exact enumeration oracle on a JSON instance", run_oracle}},
      {"graver", {"Graver elements within an l-infinity radius", run_graver}},
      {"check-graver", {"exact Graver membership of a vector", run_check_graver}},
      {"decompose", {"uniform decomposition of a kernel element", run_decompose}},
      {"steinitz", {"Steinitz rearrangement of a vector sequence", run_steinitz}},
      {"merge", {"merging partition of a vector sequence", run_merge}},
      {"colorful", {"colorful zero-sum subset", run_colorful}},
      {"partition", {"integer partition constructions", run_partition}},
      {"sched-rejection",
       {"makespan plus rejection cost scheduling",
        [](const RunConfig& c, Json& r) { return run_sched(c, r, gblocks::sched::Variant::kRejection); }}},
      {"sched-bicriteria",
       {"makespan plus weighted completion time scheduling",
        [](const RunConfig& c, Json& r) { return run_sched(c, r, gblocks::sched::Variant::kBicriteria); }}},
      {"verify-paper-example", {"kernel and decomposition identities of the growth family", run_verify_example}},
      {"random-instance", {"seeded random small instance", run_random_instance}},
  };
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--in,-i", cfg.input, "input JSON file");
    sub->add_option("--out,-o", cfg.out, "output JSON file (default stdout)");
    sub->add_option("--radius", cfg.radius, "l-infinity search radius")->check(CLI::PositiveNumber);
    sub->add_option("--sigma", cfg.sigma, "close/far threshold")->check(CLI::PositiveNumber);
    sub->add_option("--lambda", cfg.lambda, "tier-one value")->check(CLI::PositiveNumber);
    sub->add_option("--zeta", cfg.zeta, "norm bound (default: max norm of the input)")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", cfg.max_iters, "augmentation iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--node-cap", cfg.node_cap, "enumeration node cap")->check(CLI::PositiveNumber);
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--n", cfg.n, "brick count")->check(CLI::PositiveNumber);
    sub->add_flag("--wall-time", cfg.wall_time, "include wall time in reports");
    sub->add_flag("--certify", cfg.certify, "also run the exact Graver check");
    sub->add_flag("--brute-force", cfg.brute_force, "also run the brute-force schedule oracle");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }
  for (const auto& [name, entry] : commands)
    if (app.got_subcommand(name)) cfg.subcommand = name;

  Json report;
  report["config"] = config_json(cfg);
  int status = kOk;
  try {
    status = commands.at(cfg.subcommand).second(cfg, report);
  } catch (const gblocks::ResourceError& e) {
    report["status"] = "resource_limit";
    report["error"] = e.what();
    status = kResource;
  } catch (const gblocks::InternalError& e) {
    report["status"] = "internal_error";
    report["error"] = e.what();
    status = kInternal;
  } catch (const gblocks::Error& e) {
    report["status"] = "input_error";
    report["error"] = e.what();
    status = kInput;
  } catch (const nlohmann::json::exception& e) {
    report["status"] = "input_error";
    report["error"] = e.what();
    status = kInput;
  }
  try {
    emit(cfg, report);
  } catch (const gblocks::Error& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  }
  return status;
}
