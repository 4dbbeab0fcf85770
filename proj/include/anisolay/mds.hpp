#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "anisolay/graph.hpp"

namespace anisolay {

/// n x 2 node positions; column-major so x and y are each contiguous.
using Layout = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Per-pair residual weights, symmetric with a zero diagonal.
class StressWeights {
 public:
  StressWeights() = default;
  explicit StressWeights(Eigen::MatrixXd w);

  /// w_uv = d_uv^-2.
  static StressWeights elastic(const DistanceMatrix& d);

  std::size_t size() const noexcept { return static_cast<std::size_t>(w_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return w_; }

 private:
  Eigen::MatrixXd w_;
};

/// sigma(X) = sum_{u<v} w_uv (d_uv - |x_u - x_v|)^2, each unordered pair once.
double stress(const Layout& x, const DistanceMatrix& d, const StressWeights& w);

/// Gradient of stress(): 2 (V - B(X)) X, evaluated pairwise without forming V or B.
Layout stress_gradient(const Layout& x, const DistanceMatrix& d, const StressWeights& w);

/// Dense V and B(X). b_ij = -w_ij d_ij / delta_ij, or 0 when the points coincide.
struct GradientMatrices {
  Eigen::MatrixXd v;
  Eigen::MatrixXd b;
};
GradientMatrices gradient_matrices(const Layout& x, const DistanceMatrix& d, const StressWeights& w);

struct DescentOptions {
  double step = 0.05;      // alpha
  int max_iters = 2000;
  double tol = 0.0;        // <= 0 selects 1e-4 * max d_uv
  bool backtracking = true;
  int max_halvings = 50;

  double resolved_tol(const DistanceMatrix& d) const { return tol > 0.0 ? tol : 1e-4 * d.max(); }
};

/// Seeded uniform positions in the unit disk.
Layout random_disk_layout(std::size_t n, std::uint64_t seed);

struct DescentStep {
  Layout next;
  double displacement = 0.0;  // max node displacement of the accepted step
  double objective = 0.0;     // objective at `next`
};

struct MdsResult {
  Layout layout;
  int iterations = 0;
  bool converged = false;
  std::vector<double> stress_trace;  // stress before the first step, then after each accepted step
};

/// Gradient descent on stress. A step is proposed from alpha and halved while it
/// increases stress; once the proposed displacement drops below tol the run
/// stops without applying it. Throws NumericalError on non-finite stress.
MdsResult mds_layout(const DistanceMatrix& d, const Layout& init, const DescentOptions& opts = {});
MdsResult mds_layout(const DistanceMatrix& d, std::uint64_t seed, const DescentOptions& opts = {});

/// `{"positions": [[x,y],...]}`
std::string layout_to_json(const Layout& x);
Layout layout_from_json(std::string_view text);

}  // namespace anisolay
