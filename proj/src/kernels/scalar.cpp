#include <cmath>

#include "kernels_impl.hpp"

namespace anisolay::kernels::detail {
namespace {

double cdf_sum(const double* m, std::size_t n, double t, double inv_bandwidth) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += epanechnikov_cdf((t - m[i]) * inv_bandwidth);
  return sum;
}

double pair_stress(double px, double py, const double* xs, const double* ys, const double* d,
                   const double* w, std::size_t n) {
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = px - xs[j];
    const double dy = py - ys[j];
    const double r = d[j] - std::sqrt(dx * dx + dy * dy);
    sum += w[j] * r * r;
  }
  return sum;
}

void stress_gradient_row(double px, double py, const double* xs, const double* ys, const double* d,
                         const double* w, std::size_t n, double* gx, double* gy) {
  double ax = 0.0;
  double ay = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = px - xs[j];
    const double dy = py - ys[j];
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist == 0.0) continue;
    const double f = 2.0 * w[j] * (1.0 - d[j] / dist);
    ax += f * dx;
    ay += f * dy;
  }
  *gx = ax;
  *gy = ay;
}

double tps_radial_sum(double px, double py, const double* sx, const double* sy, const double* c,
                      std::size_t n) {
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = px - sx[j];
    const double dy = py - sy[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 > 0.0) sum += c[j] * (0.5 * r2 * std::log(r2));
  }
  return sum;
}

}  // namespace

const KernelTable scalar_table{cdf_sum, pair_stress, stress_gradient_row, tps_radial_sum};

}  // namespace anisolay::kernels::detail
