#include "anisolay/mds.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "anisolay/error.hpp"
#include "anisolay/kernels.hpp"

namespace anisolay {

StressWeights::StressWeights(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() != w_.cols()) throw std::invalid_argument("stress weights must be square");
}

StressWeights StressWeights::elastic(const DistanceMatrix& d) {
  const Eigen::MatrixXd& m = d.matrix();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j) w(i, j) = 1.0 / (m(i, j) * m(i, j));
    }
  }
  return StressWeights(std::move(w));
}

namespace {

void check_shapes(const Layout& x, const DistanceMatrix& d, const StressWeights& w) {
  if (static_cast<std::size_t>(x.rows()) != d.size() || d.size() != w.size()) {
    throw std::invalid_argument("layout, distance and weight sizes disagree");
  }
}

}  // namespace

double stress(const Layout& x, const DistanceMatrix& d, const StressWeights& w) {
  check_shapes(x, d, w);
  const auto& k = kernels::active();
  const auto n = static_cast<std::size_t>(x.rows());
  const double* xs = x.col(0).data();
  const double* ys = x.col(1).data();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Column i of the symmetric matrices is row i, contiguous from i + 1.
    const auto col = static_cast<Eigen::Index>(i);
    total += k.pair_stress(xs[i], ys[i], xs + i + 1, ys + i + 1, d.matrix().col(col).data() + i + 1,
                           w.matrix().col(col).data() + i + 1, n - i - 1);
  }
  return total;
}

Layout stress_gradient(const Layout& x, const DistanceMatrix& d, const StressWeights& w) {
  check_shapes(x, d, w);
  const auto& k = kernels::active();
  const auto n = static_cast<std::size_t>(x.rows());
  Layout g(x.rows(), 2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    k.stress_gradient_row(x(col, 0), x(col, 1), x.col(0).data(), x.col(1).data(), d.matrix().col(col).data(),
                          w.matrix().col(col).data(), n, &g(col, 0), &g(col, 1));
  }
  return g;
}

GradientMatrices gradient_matrices(const Layout& x, const DistanceMatrix& d, const StressWeights& w) {
  check_shapes(x, d, w);
  const Eigen::Index n = x.rows();
  GradientMatrices m{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      m.v(i, j) = -w.matrix()(i, j);
      const double delta = (x.row(i) - x.row(j)).norm();
      m.b(i, j) = delta != 0.0 ? -w.matrix()(i, j) * d(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) / delta
                               : 0.0;
    }
    m.v(i, i) = -m.v.row(i).sum();
    m.b(i, i) = -m.b.row(i).sum();
  }
  return m;
}

Layout random_disk_layout(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Layout x(static_cast<Eigen::Index>(n), 2);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double r = std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    x(i, 0) = r * std::cos(theta);
    x(i, 1) = r * std::sin(theta);
  }
  return x;
}

MdsResult mds_layout(const DistanceMatrix& d, const Layout& init, const DescentOptions& opts) {
  if (static_cast<std::size_t>(init.rows()) != d.size()) throw std::invalid_argument("init layout size mismatch");
  MdsResult result;
  result.layout = init;
  if (d.size() <= 1) {
    result.layout = Layout::Zero(static_cast<Eigen::Index>(d.size()), 2);
    result.converged = true;
    result.stress_trace.push_back(0.0);
    return result;
  }
  const StressWeights w = StressWeights::elastic(d);
  const double tol = opts.resolved_tol(d);
  double current = stress(result.layout, d, w);
  if (!std::isfinite(current)) throw NumericalError("initial stress is not finite");
  result.stress_trace.push_back(current);

  for (int it = 0; it < opts.max_iters; ++it) {
    const Layout grad = stress_gradient(result.layout, d, w);
    double alpha = opts.step;
    Layout candidate = result.layout - alpha * grad;
    double next = stress(candidate, d, w);
    int halvings = 0;
    while (opts.backtracking && !(next <= current) && halvings < opts.max_halvings) {
      alpha *= 0.5;
      candidate = result.layout - alpha * grad;
      next = stress(candidate, d, w);
      ++halvings;
    }
    if (!std::isfinite(next)) {
      throw NumericalError("MDS stress became non-finite at iteration " + std::to_string(it + 1) +
                           "; use a smaller step size (alpha)");
    }
    if (opts.backtracking && next > current) {
      result.converged = true;  // no descent left at float resolution
      break;
    }
    const double displacement = alpha * grad.rowwise().norm().maxCoeff();
    if (displacement < tol) {
      result.converged = true;
      break;
    }
    result.layout = std::move(candidate);
    current = next;
    result.stress_trace.push_back(current);
    result.iterations = it + 1;
  }
  return result;
}

MdsResult mds_layout(const DistanceMatrix& d, std::uint64_t seed, const DescentOptions& opts) {
  return mds_layout(d, random_disk_layout(d.size(), seed), opts);
}

std::string layout_to_json(const Layout& x) {
  nlohmann::json positions = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) positions.push_back({x(i, 0), x(i, 1)});
  return nlohmann::json{{"positions", std::move(positions)}}.dump() + "\n";
}

Layout layout_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto& positions = doc.at("positions");
    Layout x(static_cast<Eigen::Index>(positions.size()), 2);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const auto& p = positions[i];
      if (p.size() != 2) throw ParseError("position " + std::to_string(i) + " is not an [x, y] pair", 0);
      x(static_cast<Eigen::Index>(i), 0) = p[0].get<double>();
      x(static_cast<Eigen::Index>(i), 1) = p[1].get<double>();
      if (!std::isfinite(x(static_cast<Eigen::Index>(i), 0)) || !std::isfinite(x(static_cast<Eigen::Index>(i), 1))) {
        throw ParseError("position " + std::to_string(i) + " is not finite", 0);
      }
    }
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed layout JSON: ") + e.what(), 0);
  }
}

}  // namespace anisolay
