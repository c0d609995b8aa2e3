#include "rvs/simd/kernels.hpp"

namespace rvs::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double p = a[i] * b[i];
    acc[i % 8] = acc[i % 8] + p;
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
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] * factor;
}

}  // namespace rvs::simd::scalar
