#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cvsvm/errors.hpp"

namespace cvsvm {

// Dense row-major matrix with lda == cols. Small sizes only; no views, copies are cheap
// at this project's scale (p <= 30, n <= a few 10k).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool all_finite() const {
    for (double v : data) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }
};

// Copies the given rows (in the given order) into a new matrix.
Matrix gather_rows(const Matrix& m, std::span<const int> indices);

// Lower Cholesky factor L with A = L L^T. Throws numeric_error if A is not positive
// definite (pivot <= 0) or not square.
Matrix cholesky_lower(const Matrix& a);

// Solves L y = b then L^T x = y in place; b.size() == L.rows.
void cholesky_solve(const Matrix& lower, std::span<double> b);

// Per-column mean/stddev over the first stats_rows rows, applied to all rows.
// Columns with zero spread are centered only.
void standardize_columns(Matrix& m, std::size_t stats_rows);

}  // namespace cvsvm
