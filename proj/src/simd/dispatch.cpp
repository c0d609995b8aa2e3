#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rvs/simd/kernels.hpp"

namespace rvs::simd {

#if defined(RVS_HAVE_AVX2_KERNELS)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void dot_rows(const double*, std::size_t, std::size_t, const double*, double*);
void scale(double*, std::size_t, double);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void dot_rows(const double*, std::size_t, std::size_t, const double*, double*);
void scale(double*, std::size_t, double);
}  // namespace neon
#endif

namespace {

const Kernels kScalar{&scalar::dot, &scalar::dot_rows, &scalar::scale};
#if defined(RVS_HAVE_AVX2_KERNELS)
const Kernels kAvx2{&avx2::dot, &avx2::dot_rows, &avx2::scale};
#endif
#if defined(__aarch64__)
const Kernels kNeon{&neon::dot, &neon::dot_rows, &neon::scale};
#endif

Level initial_level() {
  Level best = Level::Scalar;
  if (is_supported(Level::Avx2)) best = Level::Avx2;
  if (is_supported(Level::Neon)) best = Level::Neon;
  if (const char* env = std::getenv("RVS_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Level::Scalar;
    if (v == "avx2" && is_supported(Level::Avx2)) return Level::Avx2;
    if (v == "neon" && is_supported(Level::Neon)) return Level::Neon;
  }
  return best;
}

std::atomic<Level>& level_slot() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
    case Level::Neon: return "neon";
  }
  return "scalar";
}

bool is_supported(Level level) {
  switch (level) {
    case Level::Scalar:
      return true;
    case Level::Avx2:
#if defined(RVS_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Level::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Level level) {
  if (!is_supported(level)) {
    throw std::invalid_argument("SIMD level '" + std::string(to_string(level)) +
                                "' is not supported on this host");
  }
  switch (level) {
#if defined(RVS_HAVE_AVX2_KERNELS)
    case Level::Avx2: return kAvx2;
#endif
#if defined(__aarch64__)
    case Level::Neon: return kNeon;
#endif
    default: return kScalar;
  }
}

Level active_level() { return level_slot().load(std::memory_order_relaxed); }

void set_active_level(Level level) {
  kernels_for(level);
  level_slot().store(level, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return kernels_for(active_level()).dot(a.data(), b.data(), a.size());
}

void dot_rows(std::span<const double> rows, std::size_t dim, std::span<const double> query,
              std::span<double> out) {
  if (query.size() != dim) throw std::invalid_argument("dot_rows: query length mismatch");
  if (dim == 0 ? !rows.empty() : rows.size() % dim != 0) {
    throw std::invalid_argument("dot_rows: matrix size is not a multiple of dim");
  }
  const std::size_t count = dim == 0 ? 0 : rows.size() / dim;
  if (out.size() != count) throw std::invalid_argument("dot_rows: output length mismatch");
  kernels_for(active_level()).dot_rows(rows.data(), count, dim, query.data(), out.data());
}

void scale(std::span<double> v, double factor) {
  kernels_for(active_level()).scale(v.data(), v.size(), factor);
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace rvs::simd
