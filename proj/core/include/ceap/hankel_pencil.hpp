#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ceap/model.hpp"

namespace ceap {

/// Square Hankel pair u0[i][j] = s_{i+j}, u1[i][j] = s_{i+j+1} of size n/2.
struct HankelPencil {
  Eigen::MatrixXcd u0;
  Eigen::MatrixXcd u1;
  std::size_t n = 0;

  std::size_t size() const noexcept { return n / 2; }
};

HankelPencil build_pencil(std::span<const Complex> samples);
HankelPencil build_pencil(const SignalSeries& series);

enum class PairQuality {
  kEigenvector,    // weight from the normalized right eigenvector
  kLeastSquares,   // eigenvectors ill conditioned; joint Vandermonde solve
};

enum class ExclusionReason {
  kInfinite,       // beta ~ 0
  kIndeterminate,  // alpha ~ beta ~ 0
  kRankDeficient,  // direction in the numerical null space of U0
};

struct EigenPair {
  Complex node;
  Complex weight;
};

/// Generalized eigenvalue alpha/beta that was not turned into a pair.
struct ExcludedEigenvalue {
  Complex alpha;
  Complex beta;
  ExclusionReason reason;
};

struct EigenSolution {
  std::vector<EigenPair> pairs;
  std::vector<PairQuality> quality;  // one per pair
  std::vector<ExcludedEigenvalue> excluded;

  std::size_t size() const noexcept { return pairs.size(); }
  std::vector<Complex> nodes() const;
  ExponentialModel to_model() const;
};

/// Singular values of the scaled U0 below this fraction of the largest one
/// are treated as zero.
inline constexpr double kPencilRankTolerance = 1e-12;

/// Accurate generalized eigen-solve of [U1, U0]: two-sided diagonal
/// equilibration, projection onto the numerical range of U0, complex QZ.
/// Weights follow from c_j = u_j^T [s_0..s_{m-1}]^T with V^T u_j = e_j.
/// A nonzero `max_rank` also caps the projection at that many singular
/// directions (matrix pencil / GPOF truncation).
EigenSolution solve_pencil(const HankelPencil& pencil, const SignalSeries& series,
                           std::size_t max_rank = 0);

/// Keeps the p_tilde pairs of largest |c|, ordered by descending |c|
/// (stable on ties). Returns every pair if fewer are available.
EigenSolution truncate_by_weight(const EigenSolution& sol, std::size_t p_tilde);

}  // namespace ceap
