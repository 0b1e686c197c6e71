#pragma once

#include <Eigen/Dense>

namespace ceap {

struct LsqrOptions {
  double tolerance = 1e-10;  // relative residual / normal-equation residual
  int max_iterations = 200;
};

struct LsqrResult {
  Eigen::VectorXcd x;
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Paige-Saunders LSQR for min ||A x - b||_2 over complex A, with the
/// columns of A equilibrated to unit norm before iterating.
LsqrResult lsqr(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                const LsqrOptions& options = {});

}  // namespace ceap
