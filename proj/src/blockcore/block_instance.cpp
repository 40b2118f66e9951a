// SPDX-License-Identifier: Apache-2.0
#include "gblocks/block_instance.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace gblocks {

namespace {

std::string dim_message(const char* what, std::size_t got, std::size_t want) {
  return std::string(what) + ": got " + std::to_string(got) + ", expected " + std::to_string(want);
}

void check_vector_dims(const BlockInstance& inst, const BlockVector& x) {
  if (x.brick0.size() != inst.dims.tB) throw StructuralError(dim_message("brick 0 length", x.brick0.size(), inst.dims.tB));
  if (x.bricks.size() != inst.dims.n) throw StructuralError(dim_message("brick count", x.bricks.size(), inst.dims.n));
  for (const auto& b : x.bricks)
    if (b.size() != inst.dims.tA) throw StructuralError(dim_message("brick length", b.size(), inst.dims.tA));
}

// Smallest value of row·x over the box lower ≤ x ≤ upper.
Int row_minimum(std::span<const Int> row, std::span<const Int> lower, std::span<const Int> upper) {
  Int s = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == 0) continue;
    s = checked_add(s, std::min(checked_mul(row[j], lower[j]), checked_mul(row[j], upper[j])));
  }
  return s;
}

}  // namespace

Vec BlockVector::flatten() const {
  Vec out = brick0;
  for (const auto& b : bricks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

BlockVector BlockVector::unflatten(std::span<const Int> flat, std::size_t tB, std::size_t tA,
                                   std::size_t n) {
  if (flat.size() != tB + n * tA) throw StructuralError(dim_message("flat vector length", flat.size(), tB + n * tA));
  BlockVector x;
  x.brick0.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(tB));
  x.bricks.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto first = flat.begin() + static_cast<std::ptrdiff_t>(tB + i * tA);
    x.bricks[i].assign(first, first + static_cast<std::ptrdiff_t>(tA));
  }
  return x;
}

BlockVector BlockVector::zeros(const BlockDims& dims) {
  BlockVector x;
  x.brick0.assign(dims.tB, 0);
  x.bricks.assign(dims.n, Vec(dims.tA, 0));
  return x;
}

BlockInstance make_instance(Matrix C, Matrix B, std::vector<Matrix> A, std::vector<Matrix> D,
                            Vec rhs, Vec lower, Vec upper, SeparableObjective objective,
                            Sense sense) {
  BlockInstance inst;
  if (A.empty() || A.size() != D.size())
    throw StructuralError("need n ≥ 1 bricks with one A_i and one D_i each");
  inst.dims.n = A.size();
  inst.dims.sC = inst.dims.sD = C.rows();
  inst.dims.tB = inst.dims.tC = C.cols();
  inst.dims.sB = inst.dims.sA = B.rows();
  inst.dims.tA = inst.dims.tD = A.front().cols();
  inst.C = std::move(C);
  inst.B = std::move(B);
  inst.A = std::move(A);
  inst.D = std::move(D);
  inst.rhs = std::move(rhs);
  inst.lower = std::move(lower);
  inst.upper = std::move(upper);
  inst.objective = std::move(objective);
  inst.sense = sense;
  Int delta = std::max(inst.C.max_abs(), inst.B.max_abs());
  for (const auto& a : inst.A) delta = std::max(delta, a.max_abs());
  for (const auto& d : inst.D) delta = std::max(delta, d.max_abs());
  inst.dims.delta = delta;
  validate(inst);
  return inst;
}

void validate(const BlockInstance& inst) {
  const BlockDims& d = inst.dims;
  if (d.n == 0 || d.sC == 0 || d.sB == 0 || d.tA == 0 || d.tB == 0)
    throw StructuralError("all block dimensions must be positive");
  if (d.sC != d.sD || d.sA != d.sB || d.tB != d.tC || d.tA != d.tD)
    throw StructuralError("block dimensions are not coupled consistently");
  if (inst.C.rows() != d.sC || inst.C.cols() != d.tB) throw StructuralError("C has the wrong shape");
  if (inst.B.rows() != d.sB || inst.B.cols() != d.tB) throw StructuralError("B has the wrong shape");
  if (inst.A.size() != d.n || inst.D.size() != d.n) throw StructuralError("brick count mismatch");
  for (std::size_t i = 0; i < d.n; ++i) {
    if (inst.A[i].rows() != d.sA || inst.A[i].cols() != d.tA)
      throw StructuralError("A_" + std::to_string(i + 1) + " has the wrong shape");
    if (inst.D[i].rows() != d.sD || inst.D[i].cols() != d.tA)
      throw StructuralError("D_" + std::to_string(i + 1) + " has the wrong shape");
  }
  if (inst.rhs.size() != d.rows()) throw StructuralError(dim_message("rhs length", inst.rhs.size(), d.rows()));
  if (inst.lower.size() != d.cols() || inst.upper.size() != d.cols())
    throw StructuralError(dim_message("bound length", inst.lower.size(), d.cols()));
  for (std::size_t j = 0; j < d.cols(); ++j)
    if (inst.lower[j] > inst.upper[j])
      throw DomainError("lower bound exceeds upper bound at coordinate " + std::to_string(j));
  Int delta = std::max(inst.C.max_abs(), inst.B.max_abs());
  for (const auto& a : inst.A) delta = std::max(delta, a.max_abs());
  for (const auto& m : inst.D) delta = std::max(delta, m.max_abs());
  if (delta != d.delta) throw StructuralError("stored delta does not match the entries");
  inst.objective.validate(inst.lower, inst.upper);
}

bool is_combinatorial(const BlockInstance& inst) { return inst.dims.sB == 1; }

bool is_almost_combinatorial(const BlockInstance& inst) { return rank(inst.B) == 1; }

Matrix assemble_full(const BlockInstance& inst) {
  validate(inst);
  const BlockDims& d = inst.dims;
  Matrix H(d.rows(), d.cols());
  for (std::size_t r = 0; r < d.sC; ++r)
    for (std::size_t c = 0; c < d.tB; ++c) H(r, c) = inst.C(r, c);
  for (std::size_t i = 0; i < d.n; ++i) {
    std::size_t col0 = d.tB + i * d.tA;
    std::size_t row0 = d.sC + i * d.sA;
    for (std::size_t r = 0; r < d.sD; ++r)
      for (std::size_t c = 0; c < d.tA; ++c) H(r, col0 + c) = inst.D[i](r, c);
    for (std::size_t r = 0; r < d.sA; ++r) {
      for (std::size_t c = 0; c < d.tB; ++c) H(row0 + r, c) = inst.B(r, c);
      for (std::size_t c = 0; c < d.tA; ++c) H(row0 + r, col0 + c) = inst.A[i](r, c);
    }
  }
  return H;
}

Vec apply(const BlockInstance& inst, const BlockVector& x) {
  check_vector_dims(inst, x);
  const BlockDims& d = inst.dims;
  Vec out;
  out.reserve(d.rows());
  Vec top = inst.C.multiply(x.brick0);
  for (std::size_t i = 0; i < d.n; ++i) top = add(top, inst.D[i].multiply(x.bricks[i]));
  out.insert(out.end(), top.begin(), top.end());
  Vec bx = inst.B.multiply(x.brick0);
  for (std::size_t i = 0; i < d.n; ++i) {
    Vec local = add(bx, inst.A[i].multiply(x.bricks[i]));
    out.insert(out.end(), local.begin(), local.end());
  }
  return out;
}

Vec residual(const BlockInstance& inst, const BlockVector& x) { return sub(apply(inst, x), inst.rhs); }

bool in_kernel(const BlockInstance& inst, const BlockVector& x) { return is_zero(apply(inst, x)); }

bool within_bounds(const BlockInstance& inst, const BlockVector& x) {
  check_vector_dims(inst, x);
  Vec flat = x.flatten();
  for (std::size_t j = 0; j < flat.size(); ++j)
    if (flat[j] < inst.lower[j] || flat[j] > inst.upper[j]) return false;
  return true;
}

bool is_feasible(const BlockInstance& inst, const BlockVector& x) {
  if (!within_bounds(inst, x)) return false;
  Vec r = residual(inst, x);
  if (inst.sense == Sense::kEqual) return is_zero(r);
  return std::all_of(r.begin(), r.end(), [](Int v) { return v <= 0; });
}

Int objective_value(const BlockInstance& inst, const BlockVector& x) {
  return inst.objective.evaluate(x.flatten());
}

Int max_abs_entry(const BlockInstance& inst) {
  Int delta = std::max(inst.C.max_abs(), inst.B.max_abs());
  for (const auto& a : inst.A) delta = std::max(delta, a.max_abs());
  for (const auto& m : inst.D) delta = std::max(delta, m.max_abs());
  return delta;
}

Matrix two_stage_matrix(const BlockInstance& inst) {
  const BlockDims& d = inst.dims;
  Matrix M(d.n * d.sB, d.cols());
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t r = 0; r < d.sB; ++r) {
      for (std::size_t c = 0; c < d.tB; ++c) M(i * d.sB + r, c) = inst.B(r, c);
      for (std::size_t c = 0; c < d.tA; ++c) M(i * d.sB + r, d.tB + i * d.tA + c) = inst.A[i](r, c);
    }
  return M;
}

BlockInstance to_equality(const BlockInstance& inst) {
  validate(inst);
  if (!is_combinatorial(inst))
    throw StructuralError("unsupported structure: slack conversion needs a single B row");
  const BlockDims& d = inst.dims;
  const std::size_t width = d.tA + 1 + d.sD;

  // Slack bounds from the interval hull of each row over the original box.
  Matrix H = assemble_full(inst);
  Vec slack_ub(d.rows());
  for (std::size_t r = 0; r < d.rows(); ++r)
    slack_ub[r] = std::max<Int>(0, checked_sub(inst.rhs[r], row_minimum(H.row(r), inst.lower, inst.upper)));

  std::vector<Matrix> A(d.n), D(d.n);
  Vec lower(inst.lower.begin(), inst.lower.begin() + static_cast<std::ptrdiff_t>(d.tB));
  Vec upper(inst.upper.begin(), inst.upper.begin() + static_cast<std::ptrdiff_t>(d.tB));
  std::vector<ConvexTerm> terms(inst.objective.terms().begin(),
                                inst.objective.terms().begin() + static_cast<std::ptrdiff_t>(d.tB));
  for (std::size_t i = 0; i < d.n; ++i) {
    A[i] = Matrix(d.sA, width);
    D[i] = Matrix(d.sD, width);
    for (std::size_t c = 0; c < d.tA; ++c) {
      A[i](0, c) = inst.A[i](0, c);
      for (std::size_t r = 0; r < d.sD; ++r) D[i](r, c) = inst.D[i](r, c);
    }
    A[i](0, d.tA) = 1;
    for (std::size_t r = 0; r < d.sD; ++r) D[i](r, d.tA + 1 + r) = 1;

    std::size_t base = d.tB + i * d.tA;
    for (std::size_t c = 0; c < d.tA; ++c) {
      lower.push_back(inst.lower[base + c]);
      upper.push_back(inst.upper[base + c]);
      terms.push_back(inst.objective.term(base + c));
    }
    lower.push_back(0);
    upper.push_back(slack_ub[d.sC + i]);
    terms.emplace_back(LinearTerm{0});
    for (std::size_t r = 0; r < d.sD; ++r) {
      lower.push_back(0);
      upper.push_back(slack_ub[r]);
      terms.emplace_back(LinearTerm{0});
    }
  }
  return make_instance(inst.C, inst.B, std::move(A), std::move(D), inst.rhs, std::move(lower),
                       std::move(upper), SeparableObjective(std::move(terms), inst.objective.offset()),
                       Sense::kEqual);
}

BlockVector project_from_equality(const BlockInstance& original, const BlockVector& lifted) {
  BlockVector x;
  x.brick0 = lifted.brick0;
  x.bricks.reserve(lifted.bricks.size());
  for (const auto& b : lifted.bricks) {
    if (b.size() < original.dims.tA) throw StructuralError("lifted brick too short");
    x.bricks.emplace_back(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(original.dims.tA));
  }
  return x;
}

std::optional<BlockVector> lift_to_equality(const BlockInstance& original, const BlockVector& x) {
  if (!within_bounds(original, x)) return std::nullopt;
  BlockInstance eq = to_equality(original);
  const BlockDims& d = original.dims;
  Vec slack = sub(original.rhs, apply(original, x));
  BlockVector lifted;
  lifted.brick0 = x.brick0;
  for (std::size_t i = 0; i < d.n; ++i) {
    Vec b = x.bricks[i];
    b.push_back(slack[d.sC + i]);
    for (std::size_t r = 0; r < d.sD; ++r) b.push_back(i == 0 ? slack[r] : 0);
    lifted.bricks.push_back(std::move(b));
  }
  if (!is_feasible(eq, lifted)) return std::nullopt;
  return lifted;
}

RankOneFactor factor_rank_one(const Matrix& B) {
  RankOneFactor f{Vec(B.rows(), 0), Vec(B.cols(), 0)};
  std::size_t pivot_row = B.rows();
  for (std::size_t r = 0; r < B.rows() && pivot_row == B.rows(); ++r)
    if (!is_zero(B.row(r))) pivot_row = r;
  if (pivot_row == B.rows()) return f;
  auto row = B.row(pivot_row);
  Int g = gcd_of(row);
  std::size_t lead = 0;
  while (row[lead] == 0) ++lead;
  Int s = row[lead] > 0 ? g : -g;
  for (std::size_t c = 0; c < B.cols(); ++c) f.r[c] = row[c] / s;
  for (std::size_t r = 0; r < B.rows(); ++r) {
    Int v = B(r, lead) / f.r[lead];
    for (std::size_t c = 0; c < B.cols(); ++c)
      if (B(r, c) != checked_mul(v, f.r[c]))
        throw StructuralError("unsupported structure: rank(B) > 1");
    f.v[r] = v;
  }
  return f;
}

RankOneFactor coupling_factor(const Matrix& B) {
  if (B.rows() == 1) {
    auto row = B.row(0);
    return RankOneFactor{Vec{1}, Vec(row.begin(), row.end())};
  }
  return factor_rank_one(B);
}

}  // namespace gblocks
