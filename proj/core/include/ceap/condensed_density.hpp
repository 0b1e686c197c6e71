#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ceap/model.hpp"

namespace ceap {

/// Uniform nx-by-ny grid over [x_min, x_max] x [y_min, y_max].
struct Lattice {
  double x_min = -2.0, x_max = 2.0;
  double y_min = -2.0, y_max = 2.0;
  std::size_t nx = 81, ny = 81;

  double dx() const noexcept { return (x_max - x_min) / static_cast<double>(nx - 1); }
  double dy() const noexcept { return (y_max - y_min) / static_cast<double>(ny - 1); }
  Complex point(std::size_t i, std::size_t j) const noexcept {
    return {x_min + static_cast<double>(i) * dx(), y_min + static_cast<double>(j) * dy()};
  }
  void validate() const;
};

/// Approximate condensed density on a lattice; values[j * nx + i] is the
/// value at lattice.point(i, j). The one-point boundary ring holds zeros.
struct DensityMap {
  Lattice lattice;
  std::vector<double> values;
  double total_mass = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[j * lattice.nx + i]; }
};

struct Candidate {
  Complex node;
  double radius;
};

struct CandidateCheck {
  bool unimodal = false;
  bool overlaps = false;
};

struct IdentifiabilityResult {
  bool identifiable = false;
  std::vector<CandidateCheck> per_candidate;
};

/// Tridiagonal m x m: diagonal 1 + |z|^2, superdiagonal -z, subdiagonal -conj(z).
Eigen::MatrixXcd build_A(Complex z, std::size_t m);

/// The Hermitian matrix B B^H + (n sigma^2 / 2) A(z), B = U1(s) - z U0(s).
Eigen::MatrixXcd potential_matrix(std::span<const Complex> signal, double sigma, Complex z);

/// Sum of log(mu_j) over eigenvalues of potential_matrix above
/// 1e-13 * trace / m. `signal` is the noiseless s; its sigma is the noise level.
double log_potential_sum(const SignalSeries& signal, Complex z);

/// (1 / 2 pi n) times the 5-point Laplacian of log_potential_sum.
DensityMap condensed_density_map(const SignalSeries& signal, const Lattice& lattice);

/// A candidate is unimodal when the map restricted to lattice points with
/// |z - node| <= radius has exactly one significant strict local maximum;
/// identifiable when every candidate is unimodal and the disks are pairwise
/// disjoint.
IdentifiabilityResult check_identifiability(const DensityMap& map,
                                            std::span<const Candidate> query);

struct DesignCandidate {
  ExponentialModel model;
  std::vector<double> radii;  // one per term, or a single radius for all
};

struct DesignRow {
  std::size_t candidate = 0;
  double sigma = 0.0;
  std::size_t n = 0;
  bool identifiable = false;
};

/// Identifiability of every (candidate, sigma, n) combination.
std::vector<DesignRow> design_experiment(std::span<const DesignCandidate> candidates,
                                         std::span<const double> sigma_grid,
                                         std::span<const std::size_t> n_grid,
                                         const Lattice& lattice);

}  // namespace ceap
