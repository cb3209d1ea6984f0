#include "cvsvm/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace cvsvm::kernels {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  if (i + 2 <= n) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    i += 2;
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_neon(const double* a, std::size_t rows, std::size_t cols, std::size_t lda,
                 const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(a + r * lda, x, cols);
}

void matvec_t_neon(const double* a, std::size_t rows, std::size_t cols, std::size_t lda,
                   const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) axpy_neon(x[r], a + r * lda, y, cols);
}

double hinge_objective_neon(const double* a, std::size_t rows, std::size_t cols,
                            std::size_t lda, const double* ylab, const double* w, double b) {
  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double margin = 1.0 - ylab[r] * (dot_neon(a + r * lda, w, cols) + b);
    if (margin > 0.0) acc += margin;
  }
  return acc;
}

double squared_objective_neon(const double* a, std::size_t rows, std::size_t cols,
                              std::size_t lda, const double* ylab, const double* w,
                              double b) {
  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double resid = 1.0 - ylab[r] * (dot_neon(a + r * lda, w, cols) + b);
    acc += resid * resid;
  }
  return acc;
}

constexpr Ops kNeonOps = {
    "neon",          dot_neon,
    axpy_neon,       matvec_neon,
    matvec_t_neon,   hinge_objective_neon,
    squared_objective_neon,
};

}  // namespace

// NEON is architectural baseline on aarch64; no runtime probe needed.
const Ops* neon_ops() { return &kNeonOps; }

const Ops* avx2_ops() { return nullptr; }

}  // namespace cvsvm::kernels

#endif  // aarch64
