// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace anisolay::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

// Natural log for finite positive normal inputs. Splits x = 2^e m with
// m in [sqrt(1/2), sqrt(2)) and sums log m = 2 atanh(s), s = (m-1)/(m+1),
// through s^23 (|s| < 0.172, truncation below 1e-18 relative).
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Biased exponent to double via the 2^52 trick.
  const __m256i two52_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d two52 = _mm256_castsi256_pd(two52_bits);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(bits, 52), two52_bits)), two52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d z = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(1.0 / 23.0);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 21.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 19.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 17.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 15.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 13.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 11.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 9.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 7.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 5.0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 3.0));
  p = _mm256_mul_pd(p, z);
  // log m = 2s + 2s z p
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d log_m = _mm256_fmadd_pd(two_s, p, two_s);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  return _mm256_fmadd_pd(e, ln2_hi, _mm256_fmadd_pd(e, ln2_lo, log_m));
}

double cdf_sum(const double* m, std::size_t n, double t, double inv_bandwidth) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d vinv = _mm256_set1_pd(inv_bandwidth);
  const __m256d lo = _mm256_set1_pd(-1.0);
  const __m256d hi = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d u = _mm256_mul_pd(_mm256_sub_pd(vt, _mm256_loadu_pd(m + i)), vinv);
    u = _mm256_min_pd(_mm256_max_pd(u, lo), hi);
    const __m256d inner = _mm256_fnmadd_pd(u, u, three);  // 3 - u^2
    acc = _mm256_add_pd(acc, _mm256_fmadd_pd(u, inner, two));
  }
  double sum = 0.25 * hsum(acc);
  for (; i < n; ++i) sum += epanechnikov_cdf((t - m[i]) * inv_bandwidth);
  return sum;
}

double pair_stress(double px, double py, const double* xs, const double* ys, const double* d,
                   const double* w, std::size_t n) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(xs + j));
    const __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(ys + j));
    const __m256d dist = _mm256_sqrt_pd(_mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy)));
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(d + j), dist);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + j), r), r, acc);
  }
  double sum = hsum(acc);
  for (; j < n; ++j) {
    const double dx = px - xs[j];
    const double dy = py - ys[j];
    const double r = d[j] - std::sqrt(dx * dx + dy * dy);
    sum += w[j] * r * r;
  }
  return sum;
}

void stress_gradient_row(double px, double py, const double* xs, const double* ys, const double* d,
                         const double* w, std::size_t n, double* gx, double* gy) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d ax = zero;
  __m256d ay = zero;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(xs + j));
    const __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(ys + j));
    const __m256d dist = _mm256_sqrt_pd(_mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy)));
    const __m256d nonzero = _mm256_cmp_pd(dist, zero, _CMP_GT_OQ);
    const __m256d ratio = _mm256_div_pd(_mm256_loadu_pd(d + j), _mm256_blendv_pd(one, dist, nonzero));
    __m256d f = _mm256_mul_pd(_mm256_mul_pd(two, _mm256_loadu_pd(w + j)), _mm256_sub_pd(one, ratio));
    f = _mm256_and_pd(f, nonzero);
    ax = _mm256_fmadd_pd(f, dx, ax);
    ay = _mm256_fmadd_pd(f, dy, ay);
  }
  double sx = hsum(ax);
  double sy = hsum(ay);
  for (; j < n; ++j) {
    const double dx = px - xs[j];
    const double dy = py - ys[j];
    const double dist = std::sqrt(dx * dx + dy * dy);
    if (dist == 0.0) continue;
    const double f = 2.0 * w[j] * (1.0 - d[j] / dist);
    sx += f * dx;
    sy += f * dy;
  }
  *gx = sx;
  *gy = sy;
}

double tps_radial_sum(double px, double py, const double* sx, const double* sy, const double* c,
                      std::size_t n) {
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  __m256d acc = zero;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d dx = _mm256_sub_pd(vpx, _mm256_loadu_pd(sx + j));
    const __m256d dy = _mm256_sub_pd(vpy, _mm256_loadu_pd(sy + j));
    const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d nonzero = _mm256_cmp_pd(r2, zero, _CMP_GT_OQ);
    const __m256d lg = log_pd(_mm256_blendv_pd(one, r2, nonzero));
    const __m256d phi = _mm256_and_pd(_mm256_mul_pd(_mm256_mul_pd(half, r2), lg), nonzero);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(c + j), phi, acc);
  }
  double sum = hsum(acc);
  for (; j < n; ++j) {
    const double dx = px - sx[j];
    const double dy = py - sy[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 > 0.0) sum += c[j] * (0.5 * r2 * std::log(r2));
  }
  return sum;
}

}  // namespace

const KernelTable avx2_table{cdf_sum, pair_stress, stress_gradient_row, tps_radial_sum};

}  // namespace anisolay::kernels::detail
