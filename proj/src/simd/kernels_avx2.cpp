// Compiled with -mavx2 only; selected at runtime after a CPUID check.
#include <immintrin.h>

#include "rvs/simd/kernels.hpp"

namespace rvs::simd::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
  __m256d lo = _mm256_setzero_pd();  // lanes 0..3
  __m256d hi = _mm256_setzero_pd();  // lanes 4..7
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    lo = _mm256_add_pd(lo, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    hi = _mm256_add_pd(hi, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
  }
  alignas(32) double acc[8];
  _mm256_store_pd(acc, lo);
  _mm256_store_pd(acc + 4, hi);
  for (std::size_t lane = 0; i < n; ++i, ++lane) {
    const double p = a[i] * b[i];
    acc[lane] = acc[lane] + p;
  }
  const double t0 = acc[0] + acc[4];
  const double t1 = acc[1] + acc[5];
  const double t2 = acc[2] + acc[6];
  const double t3 = acc[3] + acc[7];
  return (t0 + t2) + (t1 + t3);
}

void dot_rows(const double* rows, std::size_t count, std::size_t dim, const double* query,
              double* out) {
  for (std::size_t r = 0; r < count; ++r) out[r] = dot(rows + r * dim, query, dim);
}

void scale(double* v, std::size_t n, double factor) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), f));
  for (; i < n; ++i) v[i] = v[i] * factor;
}

}  // namespace rvs::simd::avx2
