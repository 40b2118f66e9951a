// SPDX-License-Identifier: Apache-2.0
#include "gblocks/io.hpp"

#include <fstream>
#include <sstream>

#include "gblocks/errors.hpp"

namespace gblocks::io {

namespace {

const Json& field(const Json& j, const std::string& name) {
  if (!j.is_object()) throw DomainError("expected a JSON object around '" + name + "'");
  auto it = j.find(name);
  if (it == j.end()) throw DomainError("missing field '" + name + "'");
  return *it;
}

Int int_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw DomainError("'" + where + "' must hold integers");
  return j.get<Int>();
}

Vec vec_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError("'" + where + "' must be an array");
  Vec out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(int_of(e, where));
  return out;
}

Matrix matrix_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError("'" + where + "' must be an array of rows");
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(vec_of(r, where));
  return Matrix::from_rows(rows);
}

ConvexTerm term_from(const Json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "linear") return LinearTerm{int_of(field(j, "slope"), "slope")};
  if (kind == "quadratic") return QuadraticTerm{int_of(field(j, "a"), "a"), int_of(field(j, "b"), "b")};
  if (kind == "table") return TableTerm{int_of(field(j, "lower"), "lower"), vec_of(field(j, "values"), "values")};
  throw DomainError("unknown objective term kind '" + kind + "'");
}

Json term_json(const ConvexTerm& t) {
  if (const auto* l = std::get_if<LinearTerm>(&t)) return Json{{"kind", "linear"}, {"slope", l->slope}};
  if (const auto* q = std::get_if<QuadraticTerm>(&t))
    return Json{{"kind", "quadratic"}, {"a", q->a}, {"b", q->b}};
  const auto& tab = std::get<TableTerm>(t);
  return Json{{"kind", "table"}, {"lower", tab.lower}, {"values", tab.values}};
}

}  // namespace

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

Vec vec_from(const Json& j, const std::string& name) { return vec_of(field(j, name), name); }

std::vector<Vec> rows_from(const Json& j, const std::string& name) {
  const Json& a = field(j, name);
  if (!a.is_array()) throw DomainError("'" + name + "' must be an array of arrays");
  std::vector<Vec> out;
  for (const auto& r : a) out.push_back(vec_of(r, name));
  return out;
}

Matrix matrix_from(const Json& j, const std::string& name) { return matrix_of(field(j, name), name); }

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (const auto& r : m.to_rows()) out.push_back(r);
  return out;
}

SeparableObjective objective_from(const Json& j, std::size_t size) {
  const std::string kind = field(j, "kind").get<std::string>();
  Int offset = j.contains("offset") ? int_of(j["offset"], "offset") : 0;
  std::vector<ConvexTerm> terms;
  if (kind == "linear") {
    for (Int s : vec_from(j, "slopes")) terms.emplace_back(LinearTerm{s});
  } else if (kind == "quadratic") {
    Vec a = vec_from(j, "a"), b = vec_from(j, "b");
    if (a.size() != b.size()) throw DomainError("quadratic objective: 'a' and 'b' differ in length");
    for (std::size_t i = 0; i < a.size(); ++i) terms.emplace_back(QuadraticTerm{a[i], b[i]});
  } else if (kind == "table") {
    for (const auto& t : field(j, "tables"))
      terms.emplace_back(TableTerm{int_of(field(t, "lower"), "lower"), vec_of(field(t, "values"), "values")});
  } else if (kind == "separable") {
    for (const auto& t : field(j, "terms")) terms.push_back(term_from(t));
  } else {
    throw DomainError("unknown objective kind '" + kind + "'");
  }
  if (terms.size() != size)
    throw StructuralError("objective has " + std::to_string(terms.size()) + " terms, expected " +
                          std::to_string(size));
  return SeparableObjective(std::move(terms), offset);
}

Json to_json(const SeparableObjective& obj) {
  Json out;
  if (obj.is_linear()) {
    out["kind"] = "linear";
    out["slopes"] = obj.slopes();
  } else {
    out["kind"] = "separable";
    out["terms"] = Json::array();
    for (const auto& t : obj.terms()) out["terms"].push_back(term_json(t));
  }
  out["offset"] = obj.offset();
  return out;
}

Json dims_json(const BlockDims& d) {
  return Json{{"sA", d.sA}, {"sB", d.sB}, {"sC", d.sC}, {"sD", d.sD}, {"tA", d.tA},   {"tB", d.tB},
              {"tC", d.tC}, {"tD", d.tD}, {"n", d.n},   {"delta", d.delta}};
}

BlockInstance instance_from(const Json& j) {
  Matrix C = matrix_from(j, "C"), B = matrix_from(j, "B");
  std::vector<Matrix> A, D;
  const Json& ja = field(j, "A");
  const Json& jd = field(j, "D");
  if (!ja.is_array() || !jd.is_array()) throw DomainError("'A' and 'D' must be arrays of matrices");
  for (const auto& m : ja) A.push_back(matrix_of(m, "A"));
  for (const auto& m : jd) D.push_back(matrix_of(m, "D"));
  Vec lower = vec_from(j, "lower"), upper = vec_from(j, "upper");
  Sense sense = Sense::kEqual;
  if (j.contains("constraint_sense")) {
    const std::string s = j["constraint_sense"].get<std::string>();
    if (s == "leq") sense = Sense::kLessEqual;
    else if (s != "eq") throw DomainError("constraint_sense must be \"eq\" or \"leq\"");
  }
  SeparableObjective obj = j.contains("objective") ? objective_from(j["objective"], lower.size())
                                                   : SeparableObjective::zero(lower.size());
  BlockInstance inst = make_instance(std::move(C), std::move(B), std::move(A), std::move(D), vec_from(j, "rhs"),
                                     std::move(lower), std::move(upper), std::move(obj), sense);
  if (j.contains("dims")) {
    const Json& d = j["dims"];
    const Json derived = dims_json(inst.dims);
    for (auto it = d.begin(); it != d.end(); ++it)
      if (derived.contains(it.key()) && derived[it.key()] != it.value())
        throw StructuralError("dims." + it.key() + " does not match the matrices");
  }
  return inst;
}

Json to_json(const BlockInstance& inst) {
  Json out;
  out["dims"] = dims_json(inst.dims);
  out["C"] = to_json(inst.C);
  out["B"] = to_json(inst.B);
  out["A"] = Json::array();
  for (const auto& m : inst.A) out["A"].push_back(to_json(m));
  out["D"] = Json::array();
  for (const auto& m : inst.D) out["D"].push_back(to_json(m));
  out["rhs"] = inst.rhs;
  out["lower"] = inst.lower;
  out["upper"] = inst.upper;
  out["objective"] = to_json(inst.objective);
  out["constraint_sense"] = inst.sense == Sense::kEqual ? "eq" : "leq";
  return out;
}

BlockVector block_vector_from(const Json& j) {
  BlockVector x;
  x.brick0 = vec_from(j, "brick0");
  x.bricks = rows_from(j, "bricks");
  return x;
}

Json to_json(const BlockVector& x) {
  Json bricks = Json::array();
  for (const auto& b : x.bricks) bricks.push_back(b);
  return Json{{"brick0", x.brick0}, {"bricks", bricks}};
}

Json to_json(const solver::SolveReport& r, bool with_wall_time) {
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(Json{{"rho", s.rho}, {"phi", s.phi}, {"delta", s.delta}});
  Json out{{"iterations", r.iterations},
           {"phase1_iterations", r.phase1_iterations},
           {"objective_trace", r.objective_trace},
           {"steps", steps},
           {"subproblems", r.subproblems}};
  if (with_wall_time) out["wall_seconds"] = r.wall_seconds;
  return out;
}

sched::SchedulingInstance scheduling_from(const Json& j) {
  sched::SchedulingInstance s;
  const std::string variant = field(j, "variant").get<std::string>();
  if (variant == "rejection") s.variant = sched::Variant::kRejection;
  else if (variant == "bicriteria") s.variant = sched::Variant::kBicriteria;
  else throw DomainError("variant must be \"rejection\" or \"bicriteria\"");
  s.m = static_cast<std::size_t>(int_of(field(j, "m"), "m"));
  s.k = static_cast<std::size_t>(int_of(field(j, "k"), "k"));
  s.N = vec_from(j, "N");
  s.p = rows_from(j, "p");
  if (s.variant == sched::Variant::kRejection) {
    s.u = vec_from(j, "u");
  } else {
    s.w = vec_from(j, "w");
    s.theta = j.contains("theta") ? int_of(j["theta"], "theta") : 0;
  }
  sched::validate(s);
  return s;
}

Json to_json(const sched::SchedulingInstance& s) {
  Json p = Json::array();
  for (const auto& r : s.p) p.push_back(r);
  Json out{{"variant", s.variant == sched::Variant::kRejection ? "rejection" : "bicriteria"},
           {"m", s.m}, {"k", s.k}, {"N", s.N}, {"p", p}};
  if (s.variant == sched::Variant::kRejection) {
    out["u"] = s.u;
  } else {
    out["w"] = s.w;
    out["theta"] = s.theta;
  }
  return out;
}

Json to_json(const sched::Schedule& s) {
  Json x = Json::array();
  for (const auto& r : s.x) x.push_back(r);
  Json out{{"x", x}, {"cmax", s.cmax}, {"objective", s.objective}};
  if (!s.rejected.empty()) out["rejected"] = s.rejected;
  return out;
}

Json to_json(const graverlab::GraverSet& set) {
  Json el = Json::array();
  for (const auto& e : set.elements) el.push_back(e);
  return Json{{"radius", set.radius}, {"elements", el}, {"complete_within_radius", set.complete_within_radius}};
}

}  // namespace gblocks::io
