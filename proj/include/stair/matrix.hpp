#pragma once

#include <cstddef>
#include <vector>

#include "stair/gf.hpp"

namespace stair::gf {

class SingularMatrixError : public FieldError {
 public:
  using FieldError::FieldError;
};

/// Dense row-major matrix over a Field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Element& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  Element at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  /// Columns `which` of this matrix, in the given order.
  Matrix select_columns(const std::vector<std::size_t>& which) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Element> a_;
};

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);

/// Gauss-Jordan inverse.  Throws SingularMatrixError.
Matrix invert(const Field& f, const Matrix& m);

}  // namespace stair::gf
