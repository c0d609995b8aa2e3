#pragma once

// Dense double-precision kernels behind the embedding and search code.
//
// Every variant reproduces the scalar reference bit for bit: products are
// accumulated into eight lanes (element i goes to lane i % 8) with separate
// multiply and add roundings, and the lanes are reduced as
// ((l0 + l4) + (l2 + l6)) + ((l1 + l5) + (l3 + l7)).
// This is what lets scalar-only and vector hosts produce identical output.

#include <cstddef>
#include <span>
#include <string_view>

namespace rvs::simd {

enum class Level { Scalar, Avx2, Neon };

std::string_view to_string(Level level);

struct Kernels {
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// out[r] = dot(rows + r * dim, query) for r < count.
  void (*dot_rows)(const double* rows, std::size_t count, std::size_t dim, const double* query,
                   double* out);
  void (*scale)(double* v, std::size_t n, double factor);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void dot_rows(const double* rows, std::size_t count, std::size_t dim, const double* query,
              double* out);
void scale(double* v, std::size_t n, double factor);
}  // namespace scalar

bool is_supported(Level level);

/// Throws std::invalid_argument when `level` is not supported on this host.
const Kernels& kernels_for(Level level);

/// Chosen on first use: the RVS_SIMD environment variable ("scalar", "avx2",
/// "neon", "auto") if set and supported, otherwise the best supported level.
Level active_level();

/// Throws std::invalid_argument when unsupported.
void set_active_level(Level level);

class ScopedLevel {
 public:
  explicit ScopedLevel(Level level) : previous_(active_level()) { set_active_level(level); }
  ~ScopedLevel() { set_active_level(previous_); }
  ScopedLevel(const ScopedLevel&) = delete;
  ScopedLevel& operator=(const ScopedLevel&) = delete;

 private:
  Level previous_;
};

// Dispatching entry points. Size preconditions throw std::invalid_argument.
double dot(std::span<const double> a, std::span<const double> b);
void dot_rows(std::span<const double> rows, std::size_t dim, std::span<const double> query,
              std::span<double> out);
void scale(std::span<double> v, double factor);
double l2_norm(std::span<const double> v);

}  // namespace rvs::simd
