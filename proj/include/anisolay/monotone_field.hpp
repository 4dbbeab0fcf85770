#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "anisolay/mds.hpp"

namespace anisolay {

using Vec2 = Eigen::Vector2d;

// ---------------------------------------------------------------------------
// Thin plate spline interpolation

/// f(p) = sum_i c_i phi(|p - s_i|) + a0 + a1 x + a2 y, phi(r) = r^2 log r.
class TpsModel {
 public:
  TpsModel() = default;
  TpsModel(Layout sites, Eigen::VectorXd weights, Eigen::Vector3d affine, double lambda);

  double operator()(const Vec2& p) const;

  std::size_t size() const noexcept { return sx_.size(); }
  const Layout& sites() const noexcept { return sites_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const Eigen::Vector3d& affine() const noexcept { return affine_; }
  /// Regularization actually used; may exceed the requested one after a retry.
  double lambda() const noexcept { return lambda_; }

 private:
  Layout sites_;
  Eigen::VectorXd weights_;
  Eigen::Vector3d affine_ = Eigen::Vector3d::Zero();
  double lambda_ = 0.0;
  std::vector<double> sx_, sy_, c_;  // SoA copies for the kernel
};

/// r^2 log r with phi(0) = 0.
double tps_kernel(double r);

/// Solves the bordered TPS system [K + lambda I, P; P^T, 0]. A singular system
/// (duplicate sites) is retried with lambda = 1e-8; rank-deficient affine parts
/// (collinear sites) fall back to the minimum-norm solution. Throws
/// NumericalError if the result still does not reproduce the data.
TpsModel fit_tps(const Layout& sites, std::span<const double> values, double lambda = 0.0);

double eval_tps(const TpsModel& model, const Vec2& p);

// ---------------------------------------------------------------------------
// Strictly monotone smoothing of sampled 1D functions

enum class Direction { increasing, decreasing };

struct MonotonizeConfig {
  int rays = 360;
  int samples = 128;             // Q: samples per ray, radius 0 included
  double bandwidth = 0.1;        // omega; a fraction of the ray's value range when relative
  bool relative_bandwidth = true;
  int inversion_grid = 512;
  double inversion_tol = 1e-10;
  double flat_threshold = 1e-9;  // rays whose range is below this are left as-is

  void validate() const;
};

/// Two-step monotone estimate of m sampled at (i + 1/2)/S: builds the smoothed
/// inverse  H(t) = (1/S) sum_i Kcdf((t - m_i)/omega)  (reversed limits for
/// decreasing), then inverts it by a grid search over [min m, max m] and
/// bisection. Output is clamped to [min m, max m]. Near-constant input is
/// returned unchanged.
std::vector<double> monotonize_1d(std::span<const double> samples, Direction direction,
                                  double bandwidth, const MonotonizeConfig& cfg = {});

// ---------------------------------------------------------------------------
// Radially monotone polar field

/// Polar grid of R rays x S radii around `center`; ray a has bearing 2 pi a / R,
/// sample s has radius s r_max / (S - 1). Values are non-increasing along each
/// ray and share the value at radius 0.
class MonotonicField {
 public:
  MonotonicField() = default;
  /// values is row-major R x S. Throws std::invalid_argument on bad shapes.
  MonotonicField(Vec2 center, double r_max, int rays, int samples, std::vector<double> values);

  const Vec2& center() const noexcept { return center_; }
  double r_max() const noexcept { return r_max_; }
  int rays() const noexcept { return rays_; }
  int samples() const noexcept { return samples_; }
  double radial_spacing() const noexcept { return r_max_ / (samples_ - 1); }
  double angular_spacing() const noexcept;
  double value(int ray, int sample) const { return values_[static_cast<std::size_t>(ray) * samples_ + sample]; }
  std::span<const double> ray(int r) const {
    return {values_.data() + static_cast<std::size_t>(r) * samples_, static_cast<std::size_t>(samples_)};
  }
  const std::vector<double>& values() const noexcept { return values_; }
  double max_value() const noexcept { return max_; }
  double min_value() const noexcept { return min_; }

  bool operator==(const MonotonicField&) const = default;

 private:
  Vec2 center_ = Vec2::Zero();
  double r_max_ = 1.0;
  int rays_ = 0;
  int samples_ = 0;
  std::vector<double> values_;
  double max_ = 0.0;
  double min_ = 0.0;
};

/// Index of the maximum (first on ties).
std::size_t most_central(std::span<const double> centrality);

/// Samples `model` along cfg.rays rays from the most central node out to
/// 1.1 x the farthest node and monotonizes every ray. All rays share the
/// interpolated value at the center and are capped by it.
MonotonicField build_monotonic_field(const TpsModel& model, const Layout& layout,
                                     std::span<const double> centrality,
                                     const MonotonizeConfig& cfg = {});

/// fit_tps + build_monotonic_field.
MonotonicField build_field(const Layout& layout, std::span<const double> centrality,
                           const MonotonizeConfig& cfg = {}, double lambda = 0.0);

/// Bilinear in (angle, radius); radius clamped to [0, r_max], angle wraps.
double eval_field(const MonotonicField& f, const Vec2& p);

/// Exact gradient of the bilinear interpolant used by eval_field (one-sided on
/// cell boundaries, zero at the center itself). Radial part is zero beyond r_max.
Vec2 field_gradient(const MonotonicField& f, const Vec2& p);

/// Central differences of eval_field; h <= 0 selects 1e-3 r_max.
Vec2 field_gradient_central(const MonotonicField& f, const Vec2& p, double h = 0.0);

struct Contour {
  double level = 0.0;
  std::vector<Vec2> points;     // one per ray, then ray 0 again to close
  std::vector<double> radii;    // one per ray
  std::vector<bool> reached;    // false where the ray never drops to `level`
  bool empty() const noexcept { return points.empty(); }
};

/// Per-ray crossing radius of `level`, linearly interpolated between the
/// bracketing samples. Empty above the field maximum; rays that stay above
/// `level` contribute their r_max point.
Contour extract_contour(const MonotonicField& f, double level);

/// `{"center":[x,y],"r_max":f,"rays":R,"samples":S,"values":[[...],...]}`
std::string field_to_json(const MonotonicField& f);
MonotonicField field_from_json(std::string_view text);

}  // namespace anisolay
