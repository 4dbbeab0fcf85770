#include <algorithm>
#include <stdexcept>

#include "anisolay/kernels.hpp"
#include "anisolay/monotone_field.hpp"

namespace anisolay {

void MonotonizeConfig::validate() const {
  if (rays < 1) throw std::invalid_argument("rays must be positive");
  if (samples < 2) throw std::invalid_argument("need at least 2 samples per ray");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (inversion_grid < 2) throw std::invalid_argument("inversion grid needs at least 2 points");
  if (!(inversion_tol > 0.0)) throw std::invalid_argument("inversion tolerance must be positive");
}

namespace {

// Bracketed false position with the Illinois modification: G(a) < target <= G(b)
// on entry, the bracket shrinks from both sides until narrower than tol.
template <typename G>
double refine_root(const G& g, double target, double a, double ga, double b, double gb, double tol) {
  double fa = ga - target;
  double fb = gb - target;
  if (fb == 0.0) return b;
  int side = 0;
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    double c = (a * fb - b * fa) / (fb - fa);
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    const double fc = g(c) - target;
    if (fc == 0.0) return c;
    if (fc < 0.0) {
      a = c;
      fa = fc;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = c;
      fb = fc;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

// With samples m_i at positions (i + 1/2)/S, the smoothed inverse is
//   H(t) = (1/S) sum_i Kcdf((t - m_i) / omega)        (increasing)
//   H(t) = 1 - (1/S) sum_i Kcdf((t - m_i) / omega)    (decreasing)
// and the estimate at position x_s solves H(t) = x_s. Both reduce to finding
// t with G(t) = sum_i Kcdf(...) equal to s + 1/2 or S - s - 1/2; G is
// non-decreasing in t. A grid over [min, max] brackets each root.
std::vector<double> monotonize_1d(std::span<const double> samples, Direction direction, double bandwidth,
                                  const MonotonizeConfig& cfg) {
  if (samples.size() < 2) throw std::invalid_argument("monotonize_1d needs at least 2 samples");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(samples.begin(), samples.end());
  if (hi - lo < cfg.flat_threshold) return out;

  const auto& k = kernels::active();
  const double inv_bw = 1.0 / bandwidth;
  const std::size_t count = samples.size();
  // Kcdf is exactly 1 below the kernel support and exactly 0 above it, so only
  // the samples inside (t - omega, t + omega) need the kernel.
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  auto g = [&](double t) {
    const auto first = std::upper_bound(sorted.begin(), sorted.end(), t - bandwidth);
    const auto last = std::lower_bound(first, sorted.end(), t + bandwidth);
    const auto below = static_cast<double>(first - sorted.begin());
    return below + k.epanechnikov_cdf_sum(sorted.data() + (first - sorted.begin()), static_cast<std::size_t>(last - first), t, inv_bw);
  };

  const auto grid_n = static_cast<std::size_t>(cfg.inversion_grid);
  std::vector<double> grid_t(grid_n);
  std::vector<double> grid_g(grid_n);
  for (std::size_t j = 0; j < grid_n; ++j) {
    grid_t[j] = j + 1 == grid_n ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid_n - 1);
    grid_g[j] = g(grid_t[j]);
  }

  for (std::size_t s = 0; s < count; ++s) {
    const double target = direction == Direction::increasing ? static_cast<double>(s) + 0.5
                                                             : static_cast<double>(count - s) - 0.5;
    if (target <= grid_g.front()) {
      out[s] = lo;
      continue;
    }
    if (target >= grid_g.back()) {
      out[s] = hi;
      continue;
    }
    // First grid point with G >= target; the root lies in (t[j-1], t[j]].
    const auto j = static_cast<std::size_t>(std::lower_bound(grid_g.begin(), grid_g.end(), target) - grid_g.begin());
    out[s] = std::clamp(refine_root(g, target, grid_t[j - 1], grid_g[j - 1], grid_t[j], grid_g[j], cfg.inversion_tol),
                        lo, hi);
  }
  return out;
}

}  // namespace anisolay
