#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anisolay/graph.hpp"
#include "anisolay/mds.hpp"
#include "anisolay/monotone_field.hpp"

namespace anisolay {

struct ArlConfig {
  double w_rho = 1.0;
  int lag = 25;          // iterations between field rebuilds
  int max_iters = 2000;  // k
  DescentOptions descent;  // step, tol and backtracking; also drives the MDS initialization
  MonotonizeConfig field;
  double tps_lambda = 0.0;

  void validate() const;
};

struct TraceRecord {
  int iter = 0;
  double sigma = 0.0;
  double rho = 0.0;
  double gamma = 0.0;
  bool field_updated = false;
};

struct ArlTrace {
  std::vector<TraceRecord> records;
};

struct ArlResult {
  Layout layout;
  Layout initial;  // converged MDS layout X0
  MonotonicField field;  // field in effect at the last iteration
  ArlTrace trace;
  std::vector<double> centrality;
  bool converged = false;
};

/// rho = sum_i (M(x_i) - c_i)^2
double penalty(const MonotonicField& f, const Layout& x, std::span<const double> centrality);

/// gamma = sigma + w_rho rho
inline double objective(double sigma, double rho, double w_rho) { return sigma + w_rho * rho; }

/// Stress gradient plus w_rho * 2 (M(x_i) - c_i) grad M(x_i), with the field frozen.
Layout objective_gradient(const Layout& x, const DistanceMatrix& d, const StressWeights& w,
                          const MonotonicField& f, std::span<const double> centrality, double w_rho);

/// Lagged-field gradient descent from X0. The field is built before the first
/// step and rebuilt at every iteration t (1-based) with t mod lag == 0. Steps
/// are backtracked against gamma under the current field. Stops when a full
/// lag window of proposed steps stays below tol, or after max_iters.
ArlResult arl_layout(const DistanceMatrix& d, std::span<const double> centrality, const Layout& x0,
                     const ArlConfig& cfg = {});

/// Full pipeline: distances, normalized betweenness, seeded MDS init, ARL.
ArlResult arl_layout(const Graph& g, const ArlConfig& cfg, std::uint64_t seed);

/// Largest allowed |M(x_i) - c_i| after projection: the field's value range
/// spread over two radial sample spacings.
double contour_tolerance(const MonotonicField& f);

/// Moves every node to the nearest point of its own centrality contour.
/// Levels above the field maximum send the node to the center; levels the
/// field never reaches leave it at r_max on its current bearing.
Layout project_to_contours(const Layout& x, const MonotonicField& f, std::span<const double> centrality);

/// `iter,sigma,rho,gamma,field_updated` with one row per record.
std::string trace_to_csv(const ArlTrace& trace);

}  // namespace anisolay
