// SPDX-License-Identifier: Apache-2.0
#ifndef GBLOCKS_MATRIX_HPP_
#define GBLOCKS_MATRIX_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "gblocks/checked.hpp"

namespace gblocks {

// Dense row-major integer matrix. A matrix may have zero rows.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  // Throws StructuralError on ragged input. `cols` fixes the width when rows is empty.
  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols = 0);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const Int> row(std::size_t r) const {
    return std::span<const Int>(data_.data() + r * cols_, cols_);
  }
  Vec column(std::size_t c) const;
  std::vector<Vec> to_rows() const;

  // Checked product; throws StructuralError on length mismatch.
  Vec multiply(std::span<const Int> x) const;

  Int max_abs() const;
  bool is_zero() const;

  // Concatenation helpers; both throw StructuralError on mismatch.
  Matrix hstack(const Matrix& right) const;
  Matrix vstack(const Matrix& below) const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec data_;
};

// Rank over the rationals.
std::size_t rank(const Matrix& m);

}  // namespace gblocks

#endif  // GBLOCKS_MATRIX_HPP_
