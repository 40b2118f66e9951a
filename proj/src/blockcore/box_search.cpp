// SPDX-License-Identifier: Apache-2.0
#include "gblocks/box_search.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace gblocks {

std::uint64_t default_node_cap() {
  static const std::uint64_t cap = [] {
    const char* env = std::getenv("GRAVER_BLOCKS_NODE_CAP");
    if (env != nullptr && *env != '\0') {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return static_cast<std::uint64_t>(100'000'000);
  }();
  return cap;
}

namespace {

class LatticeSearch {
 public:
  LatticeSearch(const Matrix& M, std::span<const Int> rhs, std::span<const Int> lower,
                std::span<const Int> upper,
                const std::function<bool(std::span<const Int>)>& visit, std::uint64_t cap)
      : M_(M), rhs_(rhs), lower_(lower), upper_(upper), visit_(visit), cap_(cap),
        d_(M.cols()), m_(M.rows()), lo_((d_ + 1) * m_, 0), hi_((d_ + 1) * m_, 0),
        partial_((d_ + 1) * m_, 0), x_(d_, 0) {
    for (std::size_t k = d_; k-- > 0;) {
      for (std::size_t r = 0; r < m_; ++r) {
        Int a = M_(r, k);
        Int p = checked_mul(a, lower_[k]);
        Int q = checked_mul(a, upper_[k]);
        lo_[k * m_ + r] = checked_add(lo_[(k + 1) * m_ + r], std::min(p, q));
        hi_[k * m_ + r] = checked_add(hi_[(k + 1) * m_ + r], std::max(p, q));
      }
    }
  }

  std::uint64_t run() {
    for (std::size_t r = 0; r < m_; ++r) {
      Int t = rhs_[r];
      if (t < lo_[r] || t > hi_[r]) return nodes_;
    }
    descend(0);
    return nodes_;
  }

 private:
  // Returns false when the visitor asked to stop.
  bool descend(std::size_t k) {
    if (k == d_) return visit_(std::span<const Int>(x_));
    Int vlo = lower_[k];
    Int vhi = upper_[k];
    const Int* s = &partial_[k * m_];
    const Int* nlo = &lo_[(k + 1) * m_];
    const Int* nhi = &hi_[(k + 1) * m_];
    for (std::size_t r = 0; r < m_ && vlo <= vhi; ++r) {
      Int a = M_(r, k);
      if (a == 0) continue;
      Int t = checked_sub(rhs_[r], s[r]);
      Int p = checked_sub(t, nhi[r]);
      Int q = checked_sub(t, nlo[r]);
      if (a > 0) {
        vlo = std::max(vlo, ceil_div(p, a));
        vhi = std::min(vhi, floor_div(q, a));
      } else {
        vlo = std::max(vlo, ceil_div(q, a));
        vhi = std::min(vhi, floor_div(p, a));
      }
    }
    Int* next = &partial_[(k + 1) * m_];
    for (Int v = vlo; v <= vhi; ++v) {
      if (++nodes_ > cap_)
        throw ResourceError("lattice search exceeded the node cap of " + std::to_string(cap_));
      x_[k] = v;
      for (std::size_t r = 0; r < m_; ++r) next[r] = checked_add(s[r], checked_mul(M_(r, k), v));
      if (!descend(k + 1)) return false;
    }
    return true;
  }

  const Matrix& M_;
  std::span<const Int> rhs_, lower_, upper_;
  const std::function<bool(std::span<const Int>)>& visit_;
  std::uint64_t cap_;
  std::size_t d_, m_;
  Vec lo_, hi_, partial_, x_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::uint64_t for_each_lattice_point(const Matrix& M, std::span<const Int> rhs,
                                     std::span<const Int> lower, std::span<const Int> upper,
                                     const std::function<bool(std::span<const Int>)>& visit,
                                     std::uint64_t node_cap) {
  if (rhs.size() != M.rows() || lower.size() != M.cols() || upper.size() != M.cols())
    throw StructuralError("lattice search dimension mismatch");
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (lower[j] > upper[j]) return 0;
  LatticeSearch search(M, rhs, lower, upper, visit, node_cap);
  return search.run();
}

}  // namespace gblocks
