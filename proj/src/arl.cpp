#include "anisolay/arl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "anisolay/error.hpp"

namespace anisolay {

void ArlConfig::validate() const {
  if (!(w_rho >= 0.0)) throw std::invalid_argument("w_rho must be nonnegative");
  if (lag < 1) throw std::invalid_argument("lag must be at least 1");
  if (max_iters < 1) throw std::invalid_argument("iteration count must be at least 1");
  if (!(descent.step > 0.0)) throw std::invalid_argument("step size must be positive");
  field.validate();
}

double penalty(const MonotonicField& f, const Layout& x, std::span<const double> centrality) {
  if (static_cast<std::size_t>(x.rows()) != centrality.size()) throw std::invalid_argument("layout/centrality size mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double r = eval_field(f, x.row(i).transpose()) - centrality[static_cast<std::size_t>(i)];
    sum += r * r;
  }
  return sum;
}

Layout objective_gradient(const Layout& x, const DistanceMatrix& d, const StressWeights& w, const MonotonicField& f,
                          std::span<const double> centrality, double w_rho) {
  Layout g = stress_gradient(x, d, w);
  if (w_rho == 0.0) return g;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vec2 p = x.row(i).transpose();
    const double residual = eval_field(f, p) - centrality[static_cast<std::size_t>(i)];
    g.row(i) += (w_rho * 2.0 * residual) * field_gradient(f, p).transpose();
  }
  return g;
}

ArlResult arl_layout(const DistanceMatrix& d, std::span<const double> centrality, const Layout& x0,
                     const ArlConfig& cfg) {
  cfg.validate();
  const std::size_t n = d.size();
  if (n < 3) throw DataError("anisotropic radial layout needs at least 3 nodes");
  if (centrality.size() != n || static_cast<std::size_t>(x0.rows()) != n) {
    throw std::invalid_argument("distance, centrality and layout sizes disagree");
  }

  const StressWeights w = StressWeights::elastic(d);
  const double tol = cfg.descent.resolved_tol(d);

  ArlResult result;
  result.initial = x0;
  result.centrality.assign(centrality.begin(), centrality.end());
  Layout x = x0;
  MonotonicField field = build_field(x, centrality, cfg.field, cfg.tps_lambda);

  double sigma = stress(x, d, w);
  double rho = penalty(field, x, centrality);
  double gamma = objective(sigma, rho, cfg.w_rho);
  if (!std::isfinite(gamma)) throw NumericalError("initial objective is not finite");
  result.trace.records.push_back({0, sigma, rho, gamma, true});

  int still = 0;  // consecutive iterations whose proposed step was below tol
  for (int t = 1; t <= cfg.max_iters; ++t) {
    bool updated = false;
    if (t % cfg.lag == 0) {
      field = build_field(x, centrality, cfg.field, cfg.tps_lambda);
      rho = penalty(field, x, centrality);
      gamma = objective(sigma, rho, cfg.w_rho);
      updated = true;
    }

    const Layout grad = objective_gradient(x, d, w, field, centrality, cfg.w_rho);
    double alpha = cfg.descent.step;
    Layout candidate = x - alpha * grad;
    double next_sigma = stress(candidate, d, w);
    double next_rho = penalty(field, candidate, centrality);
    double next_gamma = objective(next_sigma, next_rho, cfg.w_rho);
    int halvings = 0;
    while (cfg.descent.backtracking && !(next_gamma <= gamma) && halvings < cfg.descent.max_halvings) {
      alpha *= 0.5;
      candidate = x - alpha * grad;
      next_sigma = stress(candidate, d, w);
      next_rho = penalty(field, candidate, centrality);
      next_gamma = objective(next_sigma, next_rho, cfg.w_rho);
      ++halvings;
    }
    if (!std::isfinite(next_gamma)) {
      throw NumericalError(fmt::format(
          "objective became non-finite at iteration {}; use a smaller step size (alpha) or penalty weight (w_rho)", t));
    }
    const bool descended = !cfg.descent.backtracking || next_gamma <= gamma;
    const double displacement = descended ? alpha * grad.rowwise().norm().maxCoeff() : 0.0;
    if (displacement < tol) {
      ++still;
    } else {
      still = 0;
      x = std::move(candidate);
      sigma = next_sigma;
      rho = next_rho;
      gamma = next_gamma;
    }
    result.trace.records.push_back({t, sigma, rho, gamma, updated});
    if (still >= cfg.lag) {
      result.converged = true;
      break;
    }
  }

  result.layout = std::move(x);
  result.field = std::move(field);
  return result;
}

ArlResult arl_layout(const Graph& g, const ArlConfig& cfg, std::uint64_t seed) {
  const DistanceMatrix d = shortest_paths(g);
  const CentralityVector c = betweenness(g);
  const MdsResult init = mds_layout(d, seed, cfg.descent);
  return arl_layout(d, c.normalized, init.layout, cfg);
}

double contour_tolerance(const MonotonicField& f) {
  return 2.0 * (f.max_value() - f.min_value()) / (f.samples() - 1);
}

namespace {

Vec2 closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

}  // namespace

Layout project_to_contours(const Layout& x, const MonotonicField& f, std::span<const double> centrality) {
  if (static_cast<std::size_t>(x.rows()) != centrality.size()) throw std::invalid_argument("layout/centrality size mismatch");
  Layout out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vec2 p = x.row(i).transpose();
    const double level = centrality[static_cast<std::size_t>(i)];
    if (level > f.max_value()) {
      out.row(i) = f.center().transpose();
      continue;
    }
    if (level < f.min_value()) {
      const Vec2 rel = p - f.center();
      const double len = rel.norm();
      const Vec2 dir = len > 0.0 ? Vec2(rel / len) : Vec2(1.0, 0.0);
      out.row(i) = (f.center() + f.r_max() * dir).transpose();
      continue;
    }
    // Only the parts of the contour where the field actually equals `level`.
    const Contour c = extract_contour(f, level);
    const auto rays = c.radii.size();
    Vec2 best = p;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < rays; ++a) {
      if (!c.reached[a]) continue;
      const std::size_t b = (a + 1) % rays;
      const Vec2 q = c.reached[b] ? closest_on_segment(p, c.points[a], c.points[b]) : c.points[a];
      const double d2 = (q - p).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = q;
      }
    }
    out.row(i) = best.transpose();
  }
  return out;
}

std::string trace_to_csv(const ArlTrace& trace) {
  std::string out = "iter,sigma,rho,gamma,field_updated\n";
  for (const TraceRecord& r : trace.records) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", r.iter, r.sigma, r.rho, r.gamma, r.field_updated ? 1 : 0);
  }
  return out;
}

}  // namespace anisolay
