#include "homocone/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define HOMOCONE_X86 1
#else
#define HOMOCONE_X86 0
#endif

namespace homocone::kernels::avx2 {

#if HOMOCONE_X86

bool available() { return __builtin_cpu_supports("avx2"); }

__attribute__((target("avx2"))) void weighted_columns(const double* cols, std::size_t n,
                                                      std::size_t d, const double* w, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < d; ++j) {
      const __m256d x = _mm256_loadu_pd(cols + j * n + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(w[j]), x));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc = acc + w[j] * cols[j * n + i];
    out[i] = acc;
  }
}

__attribute__((target("avx2"))) double centered_cross(const double* a, double ma, const double* b,
                                                      double mb, std::size_t n) {
  const __m256d va = _mm256_set1_pd(ma);
  const __m256d vb = _mm256_set1_pd(mb);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d x0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), va);
    const __m256d y0 = _mm256_sub_pd(_mm256_loadu_pd(b + i), vb);
    const __m256d x1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), va);
    const __m256d y1 = _mm256_sub_pd(_mm256_loadu_pd(b + i + 4), vb);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(x0, y0));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(x1, y1));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += (a[i] - ma) * (b[i] - mb);
  return acc;
}

#else

bool available() { return false; }

void weighted_columns(const double* cols, std::size_t n, std::size_t d, const double* w, double* out) {
  scalar::weighted_columns(cols, n, d, w, out);
}

double centered_cross(const double* a, double ma, const double* b, double mb, std::size_t n) {
  return scalar::centered_cross(a, ma, b, mb, n);
}

#endif

}  // namespace homocone::kernels::avx2
