#include <arm_neon.h>

#include "rvs/simd/kernels.hpp"

namespace rvs::simd::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t l01 = vdupq_n_f64(0.0);
  float64x2_t l23 = vdupq_n_f64(0.0);
  float64x2_t l45 = vdupq_n_f64(0.0);
  float64x2_t l67 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    // vmulq + vaddq, never vfmaq: the reference rounds the product first.
    l01 = vaddq_f64(l01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    l23 = vaddq_f64(l23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    l45 = vaddq_f64(l45, vmulq_f64(vld1q_f64(a + i + 4), vld1q_f64(b + i + 4)));
    l67 = vaddq_f64(l67, vmulq_f64(vld1q_f64(a + i + 6), vld1q_f64(b + i + 6)));
  }
  double acc[8];
  vst1q_f64(acc, l01);
  vst1q_f64(acc + 2, l23);
  vst1q_f64(acc + 4, l45);
  vst1q_f64(acc + 6, l67);
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
  const float64x2_t f = vdupq_n_f64(factor);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(v + i, vmulq_f64(vld1q_f64(v + i), f));
  for (; i < n; ++i) v[i] = v[i] * factor;
}

}  // namespace rvs::simd::neon
