#include "ceap/lsqr.hpp"

#include <cmath>

namespace ceap {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

LsqrResult lsqr(const MatrixXcd& a, const VectorXcd& b, const LsqrOptions& options) {
  const Eigen::Index cols = a.cols();
  LsqrResult result;
  result.x = VectorXcd::Zero(cols);

  VectorXd colscale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double nrm = a.col(j).norm();
    colscale(j) = nrm > 0.0 ? 1.0 / nrm : 1.0;
  }
  const MatrixXcd as = a * colscale.asDiagonal();
  const double a_norm = as.norm();

  double beta = b.norm();
  result.residual_norm = beta;
  if (beta == 0.0 || a_norm == 0.0) {
    result.converged = true;
    return result;
  }
  VectorXcd u = b / beta;
  VectorXcd v = as.adjoint() * u;
  double alpha = v.norm();
  if (alpha == 0.0) {
    result.converged = true;
    return result;
  }
  v /= alpha;
  VectorXcd w = v;
  VectorXcd y = VectorXcd::Zero(cols);
  double phibar = beta;
  double rhobar = alpha;
  const double b_norm = beta;

  for (int it = 1; it <= options.max_iterations; ++it) {
    u = as * v - alpha * u;
    beta = u.norm();
    if (beta > 0.0) u /= beta;
    v = as.adjoint() * u - beta * v;
    alpha = v.norm();
    if (alpha > 0.0) v /= alpha;

    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;
    y += (phi / rho) * w;
    w = v - (theta / rho) * w;

    result.iterations = it;
    result.residual_norm = phibar;
    const double normal_residual = phibar * alpha * std::abs(c);
    if (phibar <= options.tolerance * b_norm ||
        normal_residual <= options.tolerance * a_norm * phibar || alpha == 0.0) {
      result.converged = true;
      break;
    }
  }
  result.x = colscale.asDiagonal() * y;
  return result;
}

}  // namespace ceap
