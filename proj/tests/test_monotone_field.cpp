#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "anisolay/error.hpp"
#include "anisolay/graph.hpp"
#include "anisolay/mds.hpp"
#include "anisolay/monotone_field.hpp"

using namespace anisolay;

namespace {

constexpr double kPi = std::numbers::pi;

// values = 1 - r / r_max on every ray.
MonotonicField ramp_field(Vec2 center, double r_max, int rays = 360, int samples = 128) {
  std::vector<double> values(static_cast<std::size_t>(rays) * samples);
  for (int a = 0; a < rays; ++a) {
    for (int s = 0; s < samples; ++s) values[static_cast<std::size_t>(a) * samples + s] = 1.0 - double(s) / (samples - 1);
  }
  return MonotonicField(center, r_max, rays, samples, std::move(values));
}

struct Pipeline {
  Layout layout;
  std::vector<double> centrality;
  TpsModel model;
  MonotonicField field;
};

Pipeline ba_pipeline(std::uint64_t seed) {
  const Graph g = generate_barabasi_albert(30, 2, seed);
  Pipeline p;
  p.layout = mds_layout(shortest_paths(g), seed).layout;
  p.centrality = betweenness(g).normalized;
  p.model = fit_tps(p.layout, p.centrality);
  p.field = build_monotonic_field(p.model, p.layout, p.centrality);
  return p;
}

bool radially_monotone(const MonotonicField& f) {
  for (int a = 0; a < f.rays(); ++a) {
    for (int s = 0; s + 1 < f.samples(); ++s) {
      if (f.value(a, s + 1) > f.value(a, s) + 1e-9) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("thin plate spline") {
  SUBCASE("kernel") {
    CHECK(tps_kernel(0.0) == 0.0);
    CHECK(tps_kernel(1.0) == 0.0);
    CHECK(tps_kernel(std::exp(1.0)) == doctest::Approx(std::exp(2.0)));
    CHECK(tps_kernel(0.5) == doctest::Approx(0.25 * std::log(0.5)));
  }
  SUBCASE("three sites") {
    Layout s(3, 2);
    s << 0, 0, 1, 0, 0, 1;
    const std::vector<double> v{0, 0, 1};
    const TpsModel m = fit_tps(s, v);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(m(s.row(i).transpose()) - v[i]) < 1e-12);
  }
  SUBCASE("constants live in the affine part") {
    Layout s(6, 2);
    s << 0, 0, 1, 0, 0, 1, 2, 3, -1, 2, 0.5, -0.5;
    const std::vector<double> v(6, 0.5);
    const TpsModel m = fit_tps(s, v);
    CHECK(m.weights().cwiseAbs().maxCoeff() < 1e-12);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 0; k < 50; ++k) CHECK(eval_tps(m, Vec2(u(rng), u(rng))) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("random sites are reproduced") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0, 1);
      Layout s(10, 2);
      std::vector<double> v(10);
      for (int i = 0; i < 10; ++i) {
        s(i, 0) = u(rng);
        s(i, 1) = u(rng);
        v[static_cast<std::size_t>(i)] = u(rng);
      }
      const TpsModel m = fit_tps(s, v);
      double worst = 0.0;
      for (int i = 0; i < 10; ++i) worst = std::max(worst, std::abs(m(s.row(i).transpose()) - v[i]));
      CHECK(worst < 1e-6);
    }
  }
  SUBCASE("mirrored configuration evaluates to the mean at the midpoint") {
    // Two sites carry the values; a mirror-symmetric frame of zeros pins the affine part.
    Layout s(6, 2);
    s << -1, 0, 1, 0, 0, 2, 0, -2, -2, 2, 2, -2;
    const std::vector<double> v{0.2, 0.8, 0.5, 0.5, 0.5, 0.5};
    const TpsModel m = fit_tps(s, v);
    CHECK(m(Vec2(0, 0)) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("collinear sites still interpolate") {
    Layout s(4, 2);
    s << 0, 0, 1, 1, 2, 2, 3, 3;
    const std::vector<double> v{0, 1, 0.2, 0.5};
    const TpsModel m = fit_tps(s, v);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(m(s.row(i).transpose()) - v[i]) < 1e-8);
  }
  SUBCASE("conflicting duplicate sites fall back to smoothing") {
    Layout s(4, 2);
    s << 0, 0, 1, 0, 0, 1, 1, 0;
    const std::vector<double> v{0, 1, 0.5, 0.7};
    const TpsModel m = fit_tps(s, v);
    CHECK(m.lambda() == 1e-8);
    CHECK(m(Vec2(1, 0)) == doctest::Approx(0.85).epsilon(1e-6));
  }
}

TEST_CASE("monotonize_1d") {
  const int S = 128;
  std::vector<double> falling(S);
  std::vector<double> rising(S);
  for (int i = 0; i < S; ++i) {
    const double x = (i + 0.5) / S;
    falling[static_cast<std::size_t>(i)] = 1.0 - x * x;
    rising[static_cast<std::size_t>(i)] = x;
  }

  SUBCASE("error shrinks with the bandwidth") {
    double previous = 1.0;
    for (double omega : {0.1, 0.01, 0.001}) {
      const auto out = monotonize_1d(falling, Direction::decreasing, omega);
      double sup = 0.0;
      for (int i = 0; i < S; ++i) sup = std::max(sup, std::abs(out[static_cast<std::size_t>(i)] - falling[static_cast<std::size_t>(i)]));
      CHECK(sup < previous);
      CHECK(sup < 0.2 * omega);
      previous = sup;
    }
  }
  SUBCASE("constant input passes through") {
    const std::vector<double> flat(S, 0.3);
    CHECK(monotonize_1d(flat, Direction::decreasing, 0.1) == flat);
    std::vector<double> almost = flat;
    almost[5] += 1e-12;
    CHECK(monotonize_1d(almost, Direction::decreasing, 0.1) == almost);
  }
  SUBCASE("rising input becomes strictly falling inside its range") {
    const auto out = monotonize_1d(rising, Direction::decreasing, 0.1);
    const double lo = rising.front();
    const double hi = rising.back();
    for (int i = 0; i < S; ++i) {
      const double v = out[static_cast<std::size_t>(i)];
      CHECK(v >= lo);
      CHECK(v <= hi);
      if (i > 0) {
        const double prev = out[static_cast<std::size_t>(i - 1)];
        CHECK(v <= prev);
        if (v > lo && prev < hi) CHECK(v < prev);
      }
    }
  }
  SUBCASE("increasing direction mirrors decreasing") {
    const auto up = monotonize_1d(rising, Direction::increasing, 0.05);
    for (int i = 1; i < S; ++i) CHECK(up[static_cast<std::size_t>(i)] >= up[static_cast<std::size_t>(i - 1)]);
    CHECK(std::abs(up[64] - rising[64]) < 0.01);
  }
  SUBCASE("bad configuration") {
    CHECK_THROWS_AS(monotonize_1d(rising, Direction::decreasing, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(monotonize_1d(std::vector<double>{1.0}, Direction::decreasing, 0.1), std::invalid_argument);
  }
}

TEST_CASE("monotonic field construction") {
  SUBCASE("radially decreasing input is kept") {
    // Concentric rings of sites with values exp(-r) around the origin.
    Layout s(1 + 4 * 8, 2);
    std::vector<double> v(1 + 4 * 8);
    s.row(0) << 0, 0;
    v[0] = 1.0;
    for (int ring = 1; ring <= 4; ++ring) {
      for (int k = 0; k < 8; ++k) {
        const int i = 1 + (ring - 1) * 8 + k;
        const double t = 2 * kPi * k / 8 + 0.2 * ring;
        s.row(i) << ring * std::cos(t), ring * std::sin(t);
        v[static_cast<std::size_t>(i)] = std::exp(-double(ring));
      }
    }
    const TpsModel m = fit_tps(s, v);
    const MonotonicField f = build_monotonic_field(m, s, v);
    double worst = 0.0;
    for (int a = 0; a < f.rays(); ++a) {
      const double theta = 2 * kPi * a / f.rays();
      for (int k = 0; k < f.samples(); ++k) {
        const Vec2 p = f.center() + k * f.radial_spacing() * Vec2(std::cos(theta), std::sin(theta));
        worst = std::max(worst, std::abs(f.value(a, k) - m(p)));
      }
    }
    CHECK(worst < 0.05);
  }
  SUBCASE("random pipelines satisfy the invariants") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Pipeline p = ba_pipeline(seed);
      const MonotonicField& f = p.field;
      CHECK(radially_monotone(f));
      const std::size_t hub = most_central(p.centrality);
      CHECK(f.center() == p.layout.row(static_cast<Eigen::Index>(hub)).transpose());
      for (int a = 0; a < f.rays(); ++a) CHECK(f.value(a, 0) == f.value(0, 0));
      CHECK(f.value(0, 0) == p.model(f.center()));
      CHECK(f.max_value() == f.value(0, 0));
      double farthest = 0.0;
      for (Eigen::Index i = 0; i < p.layout.rows(); ++i) {
        farthest = std::max(farthest, (p.layout.row(i).transpose() - f.center()).norm());
      }
      CHECK(f.r_max() == doctest::Approx(1.1 * farthest));
    }
  }
  SUBCASE("rebuilding is bit-identical") {
    const Pipeline p = ba_pipeline(3);
    CHECK(build_field(p.layout, p.centrality) == p.field);
  }
  SUBCASE("ties pick the lowest index") {
    CHECK(most_central(std::vector<double>{0.2, 1.0, 1.0}) == 1);
  }
  SUBCASE("field shape is validated") {
    CHECK_THROWS_AS(MonotonicField(Vec2::Zero(), 1.0, 4, 3, std::vector<double>(11)), std::invalid_argument);
    CHECK_THROWS_AS(MonotonicField(Vec2::Zero(), 0.0, 4, 3, std::vector<double>(12)), std::invalid_argument);
  }
}

TEST_CASE("field evaluation") {
  const Vec2 c(1.0, -2.0);
  const MonotonicField f = ramp_field(c, 4.0);

  SUBCASE("center reads the common maximum") { CHECK(eval_field(f, c) == 1.0); }
  SUBCASE("stored samples are reproduced") {
    const double theta = 2 * kPi * 37 / 360;
    const Vec2 p = c + 10 * f.radial_spacing() * Vec2(std::cos(theta), std::sin(theta));
    CHECK(eval_field(f, p) == doctest::Approx(f.value(37, 10)).epsilon(1e-12));
  }
  SUBCASE("beyond the extent clamps to the rim") {
    CHECK(eval_field(f, c + Vec2(0, 10)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eval_field(f, c + Vec2(-100, 1)) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("angle wraps between the last and first ray") {
    std::vector<double> values(4 * 2);
    values = {1, 0, 1, 0.5, 1, 0.5, 1, 0.2};
    const MonotonicField g(Vec2::Zero(), 1.0, 4, 2, values);
    const double theta = 2 * kPi * 3.5 / 4;
    CHECK(eval_field(g, Vec2(std::cos(theta), std::sin(theta))) == doctest::Approx(0.1));
  }
}

TEST_CASE("field gradient") {
  SUBCASE("constant field") {
    const MonotonicField f(Vec2::Zero(), 2.0, 8, 4, std::vector<double>(32, 0.4));
    CHECK(field_gradient(f, Vec2(0.3, 0.7)).norm() == 0.0);
    CHECK(field_gradient_central(f, Vec2(0.3, 0.7)).norm() == 0.0);
  }
  SUBCASE("radial ramp points inward with slope 1/r_max") {
    const MonotonicField f = ramp_field(Vec2(0.5, 0.5), 2.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.1, 1.8), ang(0, 2 * kPi);
    for (int k = 0; k < 100; ++k) {
      const double r = u(rng);
      const double t = ang(rng);
      const Vec2 dir(std::cos(t), std::sin(t));
      const Vec2 p = f.center() + r * dir;
      const Vec2 expected = -dir / f.r_max();
      CHECK((field_gradient(f, p) - expected).norm() < 1e-9);
      CHECK((field_gradient_central(f, p) - expected).norm() < 2e-3);
    }
  }
  SUBCASE("radial component never points outward") {
    const Pipeline p = ba_pipeline(1);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.02, 1.0), ang(0, 2 * kPi);
    for (int k = 0; k < 500; ++k) {
      const Vec2 dir(std::cos(ang(rng)), std::sin(ang(rng)));
      const Vec2 unit = dir.normalized();
      const Vec2 q = p.field.center() + u(rng) * p.field.r_max() * unit;
      CHECK(field_gradient(p.field, q).dot(unit) <= 1e-12);
    }
  }
  SUBCASE("analytic gradient agrees with small central differences") {
    const Pipeline p = ba_pipeline(2);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.05, 0.95), ang(0, 2 * kPi);
    for (int k = 0; k < 200; ++k) {
      const double t = ang(rng);
      const Vec2 q = p.field.center() + u(rng) * p.field.r_max() * Vec2(std::cos(t), std::sin(t));
      const Vec2 a = field_gradient(p.field, q);
      const Vec2 fd = field_gradient_central(p.field, q, 1e-7 * p.field.r_max());
      CHECK((a - fd).norm() <= 1e-5 * std::max(1.0, a.norm()));
    }
  }
}

TEST_CASE("contours") {
  const MonotonicField ramp = ramp_field(Vec2(2, 3), 5.0);

  SUBCASE("ramp level one half is a circle") {
    const Contour c = extract_contour(ramp, 0.5);
    REQUIRE(c.points.size() == 361);
    CHECK(c.points.front() == c.points.back());
    for (std::size_t a = 0; a < 360; ++a) {
      CHECK(std::abs(c.radii[a] - 2.5) <= ramp.radial_spacing());
      CHECK((c.points[a] - ramp.center()).norm() == doctest::Approx(c.radii[a]));
      CHECK(c.reached[a]);
    }
  }
  SUBCASE("maximum level collapses to the center") {
    const Contour c = extract_contour(ramp, 1.0);
    REQUIRE_FALSE(c.empty());
    for (double r : c.radii) CHECK(r == 0.0);
  }
  SUBCASE("above the maximum is empty") { CHECK(extract_contour(ramp, 1.5).empty()); }
  SUBCASE("levels the field never reaches sit on the rim") {
    const Contour c = extract_contour(ramp, -0.5);
    for (std::size_t a = 0; a < 360; ++a) {
      CHECK(c.radii[a] == ramp.r_max());
      CHECK_FALSE(c.reached[a]);
    }
  }
  SUBCASE("nested and non-increasing in the level") {
    const Pipeline p = ba_pipeline(4);
    const Contour low = extract_contour(p.field, 0.3);
    const Contour high = extract_contour(p.field, 0.6);
    for (std::size_t a = 0; a < high.radii.size(); ++a) CHECK(high.radii[a] <= low.radii[a]);

    std::vector<Contour> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(extract_contour(p.field, p.field.min_value() + k * (p.field.max_value() - p.field.min_value()) / 20));
    bool ok = true;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      for (std::size_t a = 0; a < grid[k].radii.size(); ++a) ok = ok && grid[k].radii[a] <= grid[k - 1].radii[a];
    }
    CHECK(ok);
  }
  SUBCASE("contour points evaluate to their level") {
    const Pipeline p = ba_pipeline(5);
    const Contour c = extract_contour(p.field, 0.4);
    for (std::size_t a = 0; a < c.radii.size(); ++a) {
      if (c.reached[a]) CHECK(eval_field(p.field, c.points[a]) == doctest::Approx(0.4).epsilon(1e-9));
    }
  }
}

TEST_CASE("field json round trip") {
  const Pipeline p = ba_pipeline(6);
  const std::string text = field_to_json(p.field);
  CHECK(field_from_json(text) == p.field);
  CHECK_THROWS_AS(field_from_json("{\"center\":[0,0]}"), DataError);
}
