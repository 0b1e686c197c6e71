#include "ceap/condensed_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ceap/error.hpp"
#include "ceap/hankel_pencil.hpp"
#include "ceap/parallel.hpp"

namespace ceap {

using Eigen::MatrixXcd;

void Lattice::validate() const {
  if (nx < 3 || ny < 3) throw InvalidInput("lattice needs at least 3 points per axis");
  if (!(x_max > x_min) || !(y_max > y_min)) throw InvalidInput("lattice bounds are empty");
}

MatrixXcd build_A(Complex z, std::size_t m) {
  if (m == 0) throw InvalidInput("matrix order must be positive");
  const Eigen::Index k = static_cast<Eigen::Index>(m);
  MatrixXcd a = MatrixXcd::Zero(k, k);
  const double diag = 1.0 + std::norm(z);
  for (Eigen::Index i = 0; i < k; ++i) {
    a(i, i) = diag;
    if (i + 1 < k) {
      a(i, i + 1) = -z;
      a(i + 1, i) = -std::conj(z);
    }
  }
  return a;
}

MatrixXcd potential_matrix(std::span<const Complex> signal, double sigma, Complex z) {
  const HankelPencil p = build_pencil(signal);
  const MatrixXcd b = p.u1 - z * p.u0;
  const double n = static_cast<double>(signal.size());
  return b * b.adjoint() + (0.5 * n * sigma * sigma) * build_A(z, p.size());
}

double log_potential_sum(const SignalSeries& signal, Complex z) {
  const MatrixXcd m = potential_matrix(signal.samples(), signal.sigma(), z);
  const double trace = m.trace().real();
  const double tol = 1e-13 * trace / static_cast<double>(m.rows());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(m, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j) {
    const double mu = eig.eigenvalues()(j);
    if (mu > tol && mu > 0.0) sum += std::log(mu);
  }
  return sum;
}

DensityMap condensed_density_map(const SignalSeries& signal, const Lattice& lattice) {
  lattice.validate();
  const std::size_t nx = lattice.nx, ny = lattice.ny;
  std::vector<double> potential(nx * ny);
  parallel_for(ny, [&](std::size_t j) {
    for (std::size_t i = 0; i < nx; ++i)
      potential[j * nx + i] = log_potential_sum(signal, lattice.point(i, j));
  });

  DensityMap map;
  map.lattice = lattice;
  map.values.assign(nx * ny, 0.0);
  const double dx = lattice.dx(), dy = lattice.dy();
  const double scale = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(signal.size()));
  double mass = 0.0;
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      const std::size_t c = j * nx + i;
      const double lap = (potential[c - 1] - 2.0 * potential[c] + potential[c + 1]) / (dx * dx) +
                         (potential[c - nx] - 2.0 * potential[c] + potential[c + nx]) / (dy * dy);
      map.values[c] = scale * lap;
      mass += map.values[c] * dx * dy;
    }
  }
  map.total_mass = mass;
  return map;
}

IdentifiabilityResult check_identifiability(const DensityMap& map,
                                            std::span<const Candidate> query) {
  const Lattice& L = map.lattice;
  IdentifiabilityResult result;
  result.per_candidate.resize(query.size());
  for (std::size_t k = 0; k < query.size(); ++k) {
    const Candidate& cand = query[k];
    if (!(cand.radius > 0.0)) throw InvalidInput("candidate radius must be positive");
    const Complex c = cand.node;
    if (c.real() < L.x_min || c.real() > L.x_max || c.imag() < L.y_min || c.imag() > L.y_max)
      throw InvalidInput("candidate region not covered");

    auto inside = [&](std::size_t i, std::size_t j) {
      return std::abs(L.point(i, j) - c) <= cand.radius;
    };
    std::size_t covered = 0;
    double peak = 0.0;
    for (std::size_t j = 0; j < L.ny; ++j)
      for (std::size_t i = 0; i < L.nx; ++i)
        if (inside(i, j)) {
          ++covered;
          peak = std::max(peak, map.at(i, j));
        }
    if (covered < 9) throw InvalidInput("candidate region not covered");

    // Maxima below 1e-3 of the peak are finite-difference ripple.
    const double floor = 1e-3 * peak;
    std::size_t maxima = 0;
    for (std::size_t j = 0; j < L.ny; ++j) {
      for (std::size_t i = 0; i < L.nx; ++i) {
        if (!inside(i, j)) continue;
        const double v = map.at(i, j);
        if (!(v > floor)) continue;
        bool strict = true;
        for (int dj = -1; dj <= 1 && strict; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            const std::ptrdiff_t ii = static_cast<std::ptrdiff_t>(i) + di;
            const std::ptrdiff_t jj = static_cast<std::ptrdiff_t>(j) + dj;
            if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(L.nx) ||
                jj >= static_cast<std::ptrdiff_t>(L.ny))
              continue;
            if (!inside(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj))) continue;
            if (map.at(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)) >= v) {
              strict = false;
              break;
            }
          }
        }
        if (strict) ++maxima;
      }
    }
    result.per_candidate[k].unimodal = maxima == 1;
  }
  for (std::size_t a = 0; a < query.size(); ++a) {
    for (std::size_t b = a + 1; b < query.size(); ++b) {
      if (std::abs(query[a].node - query[b].node) <= query[a].radius + query[b].radius) {
        result.per_candidate[a].overlaps = true;
        result.per_candidate[b].overlaps = true;
      }
    }
  }
  result.identifiable = std::all_of(result.per_candidate.begin(), result.per_candidate.end(),
                                    [](const CandidateCheck& c) { return c.unimodal && !c.overlaps; });
  return result;
}

std::vector<DesignRow> design_experiment(std::span<const DesignCandidate> candidates,
                                         std::span<const double> sigma_grid,
                                         std::span<const std::size_t> n_grid,
                                         const Lattice& lattice) {
  if (candidates.empty() || sigma_grid.empty() || n_grid.empty())
    throw InvalidInput("design grids must be non-empty");
  std::vector<DesignRow> table;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const DesignCandidate& cand = candidates[c];
    const auto terms = cand.model.terms();
    if (cand.radii.size() != 1 && cand.radii.size() != terms.size())
      throw InvalidInput("need one radius per candidate node or a single radius");
    std::vector<Candidate> query;
    for (std::size_t j = 0; j < terms.size(); ++j)
      query.push_back({terms[j].node, cand.radii.size() == 1 ? cand.radii[0] : cand.radii[j]});
    for (std::size_t n : n_grid) {
      if (n < 2 || n % 2 != 0) throw InvalidInput("series length must be even");
      const std::vector<Complex> s = evaluate_model(cand.model, 0, n);
      for (double sigma : sigma_grid) {
        const DensityMap map = condensed_density_map(SignalSeries(s, sigma), lattice);
        table.push_back({c, sigma, n, check_identifiability(map, query).identifiable});
      }
    }
  }
  return table;
}

}  // namespace ceap
