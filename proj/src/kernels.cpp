#include "cvsvm/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cvsvm::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_scalar(const double* a, std::size_t rows, std::size_t cols, std::size_t lda,
                   const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_scalar(a + r * lda, x, cols);
}

void matvec_t_scalar(const double* a, std::size_t rows, std::size_t cols, std::size_t lda,
                     const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) axpy_scalar(x[r], a + r * lda, y, cols);
}

double hinge_objective_scalar(const double* a, std::size_t rows, std::size_t cols,
                              std::size_t lda, const double* ylab, const double* w, double b) {
  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double margin = 1.0 - ylab[r] * (dot_scalar(a + r * lda, w, cols) + b);
    if (margin > 0.0) acc += margin;
  }
  return acc;
}

double squared_objective_scalar(const double* a, std::size_t rows, std::size_t cols,
                                std::size_t lda, const double* ylab, const double* w,
                                double b) {
  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double resid = 1.0 - ylab[r] * (dot_scalar(a + r * lda, w, cols) + b);
    acc += resid * resid;
  }
  return acc;
}

constexpr Ops kScalarOps = {
    "scalar",          dot_scalar,
    axpy_scalar,       matvec_scalar,
    matvec_t_scalar,   hinge_objective_scalar,
    squared_objective_scalar,
};

const Ops* pick_active() {
  const Ops* best = &kScalarOps;
  if (const Ops* neon = neon_ops()) best = neon;
  if (const Ops* avx2 = avx2_ops()) best = avx2;

  if (const char* force = std::getenv("CVSVM_KERNELS")) {
    if (std::strcmp(force, "scalar") == 0) return &kScalarOps;
    if (std::strcmp(force, "avx2") == 0 && avx2_ops()) return avx2_ops();
    if (std::strcmp(force, "neon") == 0 && neon_ops()) return neon_ops();
  }
  return best;
}

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

const Ops& active_ops() {
  static const Ops* active = pick_active();
  return *active;
}

#if !defined(__x86_64__) && !defined(__i386__) && !defined(__aarch64__)
const Ops* avx2_ops() { return nullptr; }
const Ops* neon_ops() { return nullptr; }
#endif

}  // namespace cvsvm::kernels
