#include "anisolay/monotone_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "anisolay/error.hpp"
#include "anisolay/parallel.hpp"

namespace anisolay {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MonotonicField::MonotonicField(Vec2 center, double r_max, int rays, int samples, std::vector<double> values)
    : center_(center), r_max_(r_max), rays_(rays), samples_(samples), values_(std::move(values)) {
  if (rays_ < 1 || samples_ < 2) throw std::invalid_argument("field needs >= 1 ray and >= 2 samples per ray");
  if (!(r_max_ > 0.0) || !std::isfinite(r_max_)) throw std::invalid_argument("field extent must be positive");
  if (values_.size() != static_cast<std::size_t>(rays_) * static_cast<std::size_t>(samples_)) {
    throw std::invalid_argument("field value count must be rays * samples");
  }
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_ = *lo;
  max_ = *hi;
}

double MonotonicField::angular_spacing() const noexcept { return kTwoPi / rays_; }

std::size_t most_central(std::span<const double> centrality) {
  if (centrality.empty()) throw std::invalid_argument("empty centrality vector");
  return static_cast<std::size_t>(std::max_element(centrality.begin(), centrality.end()) - centrality.begin());
}

MonotonicField build_monotonic_field(const TpsModel& model, const Layout& layout, std::span<const double> centrality,
                                     const MonotonizeConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(layout.rows()) != centrality.size()) {
    throw std::invalid_argument("layout and centrality sizes disagree");
  }
  const auto hub = static_cast<Eigen::Index>(most_central(centrality));
  const Vec2 center = layout.row(hub).transpose();
  double farthest = 0.0;
  for (Eigen::Index i = 0; i < layout.rows(); ++i) farthest = std::max(farthest, (layout.row(i).transpose() - center).norm());
  const double r_max = farthest > 0.0 ? 1.1 * farthest : 1.0;

  const int rays = cfg.rays;
  const int samples = cfg.samples;
  const double dr = r_max / (samples - 1);
  std::vector<double> values(static_cast<std::size_t>(rays) * samples);

  parallel_for(static_cast<std::size_t>(rays), [&](std::size_t a) {
    const double theta = kTwoPi * static_cast<double>(a) / rays;
    const Vec2 dir(std::cos(theta), std::sin(theta));
    std::vector<double> ray(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) ray[static_cast<std::size_t>(s)] = model(center + (s * dr) * dir);
    const auto [lo, hi] = std::minmax_element(ray.begin(), ray.end());
    const double omega = cfg.relative_bandwidth ? cfg.bandwidth * (*hi - *lo) : cfg.bandwidth;
    const std::vector<double> mono =
        omega > 0.0 ? monotonize_1d(ray, Direction::decreasing, omega, cfg) : ray;
    std::copy(mono.begin(), mono.end(), values.begin() + static_cast<std::ptrdiff_t>(a * samples));
  });

  // The interpolated value at the center is the shared maximum; a running
  // minimum caps every ray at it and keeps bypassed flat rays non-increasing.
  const double peak = model(center);
  for (int a = 0; a < rays; ++a) {
    double* row = values.data() + static_cast<std::size_t>(a) * samples;
    row[0] = peak;
    for (int s = 1; s < samples; ++s) row[s] = std::min(row[s], row[s - 1]);
  }
  return MonotonicField(center, r_max, rays, samples, std::move(values));
}

MonotonicField build_field(const Layout& layout, std::span<const double> centrality, const MonotonizeConfig& cfg,
                           double lambda) {
  const TpsModel model = fit_tps(layout, centrality, lambda);
  return build_monotonic_field(model, layout, centrality, cfg);
}

double eval_field(const MonotonicField& f, const Vec2& p) {
  const Vec2 rel = p - f.center();
  const double r = std::min(rel.norm(), f.r_max());
  double theta = std::atan2(rel.y(), rel.x());
  if (theta < 0.0) theta += kTwoPi;

  const double u = theta / f.angular_spacing();
  const double ufloor = std::floor(u);
  const double fa = u - ufloor;
  const int a0 = static_cast<int>(ufloor) % f.rays();
  const int a1 = (a0 + 1) % f.rays();

  const double v = r / f.radial_spacing();
  int s0 = static_cast<int>(std::floor(v));
  s0 = std::clamp(s0, 0, f.samples() - 2);
  const double fs = std::clamp(v - s0, 0.0, 1.0);

  const double near = (1.0 - fs) * f.value(a0, s0) + fs * f.value(a0, s0 + 1);
  const double far = (1.0 - fs) * f.value(a1, s0) + fs * f.value(a1, s0 + 1);
  return (1.0 - fa) * near + fa * far;
}

Vec2 field_gradient(const MonotonicField& f, const Vec2& p) {
  const Vec2 rel = p - f.center();
  const double raw_r = rel.norm();
  if (raw_r == 0.0) return Vec2::Zero();
  const double r = std::min(raw_r, f.r_max());
  double theta = std::atan2(rel.y(), rel.x());
  if (theta < 0.0) theta += kTwoPi;

  const double u = theta / f.angular_spacing();
  const double ufloor = std::floor(u);
  const double fa = u - ufloor;
  const int a0 = static_cast<int>(ufloor) % f.rays();
  const int a1 = (a0 + 1) % f.rays();

  const double v = r / f.radial_spacing();
  const int s0 = std::clamp(static_cast<int>(std::floor(v)), 0, f.samples() - 2);
  const double fs = std::clamp(v - s0, 0.0, 1.0);

  const double v00 = f.value(a0, s0), v01 = f.value(a0, s0 + 1);
  const double v10 = f.value(a1, s0), v11 = f.value(a1, s0 + 1);
  const double near = (1.0 - fs) * v00 + fs * v01;
  const double far = (1.0 - fs) * v10 + fs * v11;

  // Clamped beyond r_max: no radial change there.
  const double d_dr = raw_r >= f.r_max() ? 0.0 : ((1.0 - fa) * (v01 - v00) + fa * (v11 - v10)) / f.radial_spacing();
  const double d_dtheta = (far - near) / f.angular_spacing();
  const Vec2 radial = rel / raw_r;
  const Vec2 tangential(-radial.y(), radial.x());
  return d_dr * radial + (d_dtheta / raw_r) * tangential;
}

Vec2 field_gradient_central(const MonotonicField& f, const Vec2& p, double h) {
  if (h <= 0.0) h = 1e-3 * f.r_max();
  const Vec2 ex(h, 0.0);
  const Vec2 ey(0.0, h);
  return {(eval_field(f, p + ex) - eval_field(f, p - ex)) / (2.0 * h),
          (eval_field(f, p + ey) - eval_field(f, p - ey)) / (2.0 * h)};
}

Contour extract_contour(const MonotonicField& f, double level) {
  Contour c;
  c.level = level;
  if (level > f.max_value()) return c;
  const int rays = f.rays();
  const int samples = f.samples();
  c.points.reserve(static_cast<std::size_t>(rays) + 1);
  c.radii.reserve(static_cast<std::size_t>(rays));
  c.reached.reserve(static_cast<std::size_t>(rays));
  for (int a = 0; a < rays; ++a) {
    const auto ray = f.ray(a);
    double radius = f.r_max();
    bool reached = false;
    if (ray[0] <= level) {
      radius = 0.0;
      reached = true;
    } else {
      for (int s = 1; s < samples; ++s) {
        if (ray[static_cast<std::size_t>(s)] <= level) {
          const double hi = ray[static_cast<std::size_t>(s - 1)];
          const double lo = ray[static_cast<std::size_t>(s)];
          radius = (s - 1 + (hi - level) / (hi - lo)) * f.radial_spacing();
          reached = true;
          break;
        }
      }
    }
    const double theta = kTwoPi * a / rays;
    c.points.push_back(f.center() + radius * Vec2(std::cos(theta), std::sin(theta)));
    c.radii.push_back(radius);
    c.reached.push_back(reached);
  }
  c.points.push_back(c.points.front());
  return c;
}

std::string field_to_json(const MonotonicField& f) {
  nlohmann::json values = nlohmann::json::array();
  for (int a = 0; a < f.rays(); ++a) {
    const auto ray = f.ray(a);
    values.push_back(std::vector<double>(ray.begin(), ray.end()));
  }
  const nlohmann::json doc{{"center", {f.center().x(), f.center().y()}},
                           {"r_max", f.r_max()},
                           {"rays", f.rays()},
                           {"samples", f.samples()},
                           {"values", std::move(values)}};
  return doc.dump() + "\n";
}

MonotonicField field_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const int rays = doc.at("rays").get<int>();
    const int samples = doc.at("samples").get<int>();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(std::max(0, rays * samples)));
    for (const auto& ray : doc.at("values")) {
      if (static_cast<int>(ray.size()) != samples) throw ParseError("field ray length does not match \"samples\"", 0);
      for (const auto& v : ray) values.push_back(v.get<double>());
    }
    const auto& c = doc.at("center");
    return MonotonicField(Vec2(c.at(0).get<double>(), c.at(1).get<double>()), doc.at("r_max").get<double>(), rays,
                          samples, std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed field JSON: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid field: ") + e.what(), 0);
  }
}

}  // namespace anisolay
