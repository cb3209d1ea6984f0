#include "cvsvm/linalg.hpp"

namespace cvsvm {

Matrix gather_rows(const Matrix& m, std::span<const int> indices) {
  Matrix out(indices.size(), m.cols);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const double* src = m.row(static_cast<std::size_t>(indices[i]));
    double* dst = out.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) dst[j] = src[j];
  }
  return out;
}

Matrix cholesky_lower(const Matrix& a) {
  if (a.rows != a.cols) throw numeric_error("cholesky: matrix must be square");
  const std::size_t n = a.rows;
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (sum <= 0.0) throw numeric_error("cholesky: matrix not positive definite");
        l.at(i, i) = std::sqrt(sum);
      } else {
        l.at(i, j) = sum / l.at(j, j);
      }
    }
  }
  return l;
}

void cholesky_solve(const Matrix& lower, std::span<double> b) {
  const std::size_t n = lower.rows;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = b[i];
    for (std::size_t k = 0; k < i; ++k) sum -= lower.at(i, k) * b[k];
    b[i] = sum / lower.at(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) sum -= lower.at(k, ii) * b[k];
    b[ii] = sum / lower.at(ii, ii);
  }
}

void standardize_columns(Matrix& m, std::size_t stats_rows) {
  if (stats_rows == 0 || stats_rows > m.rows)
    throw invalid_parameter_error("standardize: stats_rows out of range");
  for (std::size_t j = 0; j < m.cols; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < stats_rows; ++i) mean += m.at(i, j);
    mean /= static_cast<double>(stats_rows);
    double var = 0.0;
    for (std::size_t i = 0; i < stats_rows; ++i) {
      const double d = m.at(i, j) - mean;
      var += d * d;
    }
    var /= static_cast<double>(stats_rows);
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, j) = (m.at(i, j) - mean) * scale;
  }
}

}  // namespace cvsvm
