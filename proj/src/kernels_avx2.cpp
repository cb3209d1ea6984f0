#include "cvsvm/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#define CVSVM_AVX2_FN __attribute__((target("avx2,fma")))

namespace cvsvm::kernels {

namespace {

CVSVM_AVX2_FN inline double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

CVSVM_AVX2_FN double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double acc = hsum256(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

CVSVM_AVX2_FN void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

CVSVM_AVX2_FN void matvec_avx2(const double* a, std::size_t rows, std::size_t cols,
                               std::size_t lda, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(a + r * lda, x, cols);
}

CVSVM_AVX2_FN void matvec_t_avx2(const double* a, std::size_t rows, std::size_t cols,
                                 std::size_t lda, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) axpy_avx2(x[r], a + r * lda, y, cols);
}

CVSVM_AVX2_FN double hinge_objective_avx2(const double* a, std::size_t rows,
                                          std::size_t cols, std::size_t lda,
                                          const double* ylab, const double* w, double b) {
  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double margin = 1.0 - ylab[r] * (dot_avx2(a + r * lda, w, cols) + b);
    if (margin > 0.0) acc += margin;
  }
  return acc;
}

CVSVM_AVX2_FN double squared_objective_avx2(const double* a, std::size_t rows,
                                            std::size_t cols, std::size_t lda,
                                            const double* ylab, const double* w, double b) {
  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double resid = 1.0 - ylab[r] * (dot_avx2(a + r * lda, w, cols) + b);
    acc += resid * resid;
  }
  return acc;
}

constexpr Ops kAvx2Ops = {
    "avx2",          dot_avx2,
    axpy_avx2,       matvec_avx2,
    matvec_t_avx2,   hinge_objective_avx2,
    squared_objective_avx2,
};

}  // namespace

const Ops* avx2_ops() {
  static const Ops* ops = []() -> const Ops* {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Ops;
    return nullptr;
  }();
  return ops;
}

const Ops* neon_ops() { return nullptr; }

}  // namespace cvsvm::kernels

#endif  // x86
