#include "stair/matrix.hpp"

#include <string>
#include <utility>

namespace stair::gf {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& which) const {
  Matrix out(rows_, which.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < which.size(); ++k) out.at(i, k) = at(i, which[k]);
  return out;
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw FieldError("matrix product: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Element aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) ^= f.mul(aik, b.at(k, j));
    }
  return c;
}

Matrix invert(const Field& f, const Matrix& m) {
  if (m.rows() != m.cols()) throw FieldError("cannot invert a non-square matrix");
  const std::size_t n = m.rows();
  Matrix work = m;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work.at(pivot, col) == 0) ++pivot;
    if (pivot == n) throw SingularMatrixError("matrix is singular");
    if (pivot != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work.at(pivot, j), work.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    const Element scale = f.inverse(work.at(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      work.at(col, j) = f.mul(work.at(col, j), scale);
      inv.at(col, j) = f.mul(inv.at(col, j), scale);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Element factor = work.at(i, col);
      if (i == col || factor == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        work.at(i, j) ^= f.mul(factor, work.at(col, j));
        inv.at(i, j) ^= f.mul(factor, inv.at(col, j));
      }
    }
  }
  return inv;
}

}  // namespace stair::gf
