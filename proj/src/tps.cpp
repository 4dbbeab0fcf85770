#include <cmath>

#include <Eigen/Dense>

#include "anisolay/error.hpp"
#include "anisolay/kernels.hpp"
#include "anisolay/monotone_field.hpp"

namespace anisolay {

double tps_kernel(double r) { return r > 0.0 ? r * r * std::log(r) : 0.0; }

TpsModel::TpsModel(Layout sites, Eigen::VectorXd weights, Eigen::Vector3d affine, double lambda)
    : sites_(std::move(sites)), weights_(std::move(weights)), affine_(affine), lambda_(lambda) {
  if (weights_.size() != sites_.rows()) throw std::invalid_argument("TPS weight count must match site count");
  sx_.assign(sites_.col(0).data(), sites_.col(0).data() + sites_.rows());
  sy_.assign(sites_.col(1).data(), sites_.col(1).data() + sites_.rows());
  c_.assign(weights_.data(), weights_.data() + weights_.size());
}

double TpsModel::operator()(const Vec2& p) const {
  const double radial = kernels::active().tps_radial_sum(p.x(), p.y(), sx_.data(), sy_.data(), c_.data(), c_.size());
  return radial + affine_[0] + affine_[1] * p.x() + affine_[2] * p.y();
}

double eval_tps(const TpsModel& model, const Vec2& p) { return model(p); }

namespace {

struct System {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

System bordered_system(const Layout& sites, std::span<const double> values, double lambda) {
  const Eigen::Index n = sites.rows();
  System s{Eigen::MatrixXd::Zero(n + 3, n + 3), Eigen::VectorXd::Zero(n + 3)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const double k = tps_kernel((sites.row(i) - sites.row(j)).norm());
      s.a(i, j) = k;
      s.a(j, i) = k;
    }
    s.a(i, i) = lambda;
    s.a(i, n) = s.a(n, i) = 1.0;
    s.a(i, n + 1) = s.a(n + 1, i) = sites(i, 0);
    s.a(i, n + 2) = s.a(n + 2, i) = sites(i, 1);
    s.b(i) = values[static_cast<std::size_t>(i)];
  }
  return s;
}

bool solved(const System& s, const Eigen::VectorXd& x) {
  if (!x.allFinite()) return false;
  const double scale = std::max(1.0, s.b.cwiseAbs().maxCoeff());
  return (s.a * x - s.b).cwiseAbs().maxCoeff() <= 1e-8 * scale;
}

TpsModel to_model(const Layout& sites, const Eigen::VectorXd& x, double lambda) {
  const Eigen::Index n = sites.rows();
  return TpsModel(sites, x.head(n), x.tail<3>(), lambda);
}

}  // namespace

TpsModel fit_tps(const Layout& sites, std::span<const double> values, double lambda) {
  if (static_cast<std::size_t>(sites.rows()) != values.size()) {
    throw std::invalid_argument("TPS needs one value per site");
  }
  if (sites.rows() == 0) throw DataError("TPS needs at least one site");
  if (!(lambda >= 0.0)) throw std::invalid_argument("TPS smoothing must be nonnegative");

  for (const double trial : {lambda, std::max(lambda, 1e-8)}) {
    const System s = bordered_system(sites, values, trial);
    const Eigen::VectorXd x = s.a.partialPivLu().solve(s.b);
    if (solved(s, x)) return to_model(sites, x, trial);
  }
  // Collinear sites leave the affine block rank deficient; the system stays
  // consistent, so take the minimum-norm solution.
  const double fallback = std::max(lambda, 1e-8);
  const System s = bordered_system(sites, values, fallback);
  const Eigen::VectorXd x = s.a.completeOrthogonalDecomposition().solve(s.b);
  if (solved(s, x)) return to_model(sites, x, fallback);
  throw NumericalError("thin plate spline system is singular (duplicate or degenerate sites)");
}

}  // namespace anisolay
