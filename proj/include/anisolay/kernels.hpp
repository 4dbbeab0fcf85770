#pragma once

// Data-parallel inner loops shared by the optimizer and field builder.
//
// Every kernel has a portable scalar reference and, when built with
// ANISOLAY_ENABLE_AVX2, an AVX2/FMA variant. The variant is picked once at
// startup from CPUID; ANISOLAY_SIMD=scalar|avx2 overrides the choice.

#include <cstddef>
#include <string_view>

namespace anisolay::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  /// sum_i K((t - m[i]) * inv_bandwidth), K the Epanechnikov CDF.
  double (*epanechnikov_cdf_sum)(const double* m, std::size_t n, double t, double inv_bandwidth);

  /// sum_j w[j] * (d[j] - |p - x_j|)^2
  double (*pair_stress)(double px, double py, const double* xs, const double* ys,
                        const double* d, const double* w, std::size_t n);

  /// (gx, gy) = 2 sum_j w[j] (1 - d[j]/|p - x_j|) (p - x_j), coincident points skipped.
  void (*stress_gradient_row)(double px, double py, const double* xs, const double* ys,
                              const double* d, const double* w, std::size_t n,
                              double* gx, double* gy);

  /// sum_j c[j] * phi(|p - s_j|), phi(r) = r^2 log r, phi(0) = 0.
  double (*tps_radial_sum)(double px, double py, const double* sx, const double* sy,
                           const double* c, std::size_t n);
};

bool isa_supported(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

/// Kernel table for a specific ISA; throws std::invalid_argument if unsupported.
const KernelTable& table(Isa isa);

Isa active_isa() noexcept;
const KernelTable& active();

/// Overrides the runtime selection (tests, benchmarks).
void set_active_isa(Isa isa);

/// Epanechnikov kernel CDF, 0 below -1, 1 above 1.
inline double epanechnikov_cdf(double u) noexcept {
  if (u <= -1.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return 0.25 * (2.0 + u * (3.0 - u * u));
}

}  // namespace anisolay::kernels
