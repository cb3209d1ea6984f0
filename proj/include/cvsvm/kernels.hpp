#pragma once

#include <cstddef>

// Runtime-dispatched arithmetic kernels. Every operation has a scalar reference
// implementation plus SIMD variants (AVX2 on x86-64, NEON on aarch64) selected once at
// startup from CPU capabilities. The environment variable CVSVM_KERNELS=scalar|avx2|neon
// forces a backend when it is available; unavailable requests fall back silently.
//
// SIMD variants may reassociate sums, so results can differ from the scalar reference in
// the last bits; the test suite pins them together at 1e-12 relative. Within one process
// the dispatched backend is fixed, so repeated runs are bit-identical.

namespace cvsvm::kernels {

struct Ops {
  const char* name;

  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  // y = A x,  A is rows x cols row-major with leading dimension lda
  void (*matvec)(const double* a, std::size_t rows, std::size_t cols, std::size_t lda,
                 const double* x, double* y);

  // y = A^T x,  y has cols entries (caller zeroes y)
  void (*matvec_t)(const double* a, std::size_t rows, std::size_t cols, std::size_t lda,
                   const double* x, double* y);

  // sum_r max(0, 1 - ylab[r] * (A[r,:].w + b))
  double (*hinge_objective)(const double* a, std::size_t rows, std::size_t cols,
                            std::size_t lda, const double* ylab, const double* w, double b);

  // sum_r (1 - ylab[r] * (A[r,:].w + b))^2
  double (*squared_objective)(const double* a, std::size_t rows, std::size_t cols,
                              std::size_t lda, const double* ylab, const double* w, double b);
};

// Always available.
const Ops& scalar_ops();

// Null when the build target or the running CPU lacks the extension.
const Ops* avx2_ops();
const Ops* neon_ops();

// The dispatched table (resolved once, thread-safe).
const Ops& active_ops();

}  // namespace cvsvm::kernels
