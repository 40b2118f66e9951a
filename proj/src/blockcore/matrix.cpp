// SPDX-License-Identifier: Apache-2.0
#include "gblocks/matrix.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <utility>

namespace gblocks {

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw StructuralError("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + r * cols);
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Vec Matrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

std::vector<Vec> Matrix::to_rows() const {
  std::vector<Vec> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

Vec Matrix::multiply(std::span<const Int> x) const {
  if (x.size() != cols_) throw StructuralError("matrix-vector length mismatch");
  Vec out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    Int s = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      Int a = (*this)(r, c);
      if (a != 0 && x[c] != 0) s = checked_add(s, checked_mul(a, x[c]));
    }
    out[r] = s;
  }
  return out;
}

Int Matrix::max_abs() const {
  Int m = 0;
  for (Int v : data_) m = std::max(m, checked_abs(v));
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Int v) { return v == 0; });
}

Matrix Matrix::hstack(const Matrix& right) const {
  if (rows_ != right.rows_) throw StructuralError("hstack row mismatch");
  Matrix m(rows_, cols_ + right.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
    for (std::size_t c = 0; c < right.cols_; ++c) m(r, cols_ + c) = right(r, c);
  }
  return m;
}

Matrix Matrix::vstack(const Matrix& below) const {
  if (cols_ != below.cols_) throw StructuralError("vstack column mismatch");
  Matrix m(rows_ + below.rows_, cols_);
  std::copy(data_.begin(), data_.end(), m.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(), m.data_.begin() + data_.size());
  return m;
}

std::size_t rank(const Matrix& m) {
  std::vector<std::vector<mpq_class>> a(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = mpq_class(static_cast<long>(m(r, c)));
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && a[pivot][c] == 0) ++pivot;
    if (pivot == m.rows()) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      if (a[r][c] == 0) continue;
      mpq_class f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < m.cols(); ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace gblocks
