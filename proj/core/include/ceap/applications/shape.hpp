#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ceap/model.hpp"
#include "ceap/ptransform.hpp"

namespace ceap {

/// Simple polygon with counterclockwise, cyclically indexed vertices.
class Polygon {
 public:
  /// Throws InvalidInput for fewer than 3 vertices, coincident vertices,
  /// collinear consecutive vertices or clockwise orientation.
  explicit Polygon(std::vector<Complex> vertices);

  std::span<const Complex> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Complex& operator[](std::ptrdiff_t j) const;  // cyclic

 private:
  std::vector<Complex> vertices_;
};

/// Harmonic moments mu_k = integral of z^k over the polygon, k = 0..n-1,
/// with noise deviation sigma.
struct MomentSequence {
  std::vector<Complex> moments;
  double sigma = 0.0;
};

/// c_j = (i/2) (conj(e_{j-1}) / e_{j-1} - conj(e_j) / e_j) with
/// e_{j-1} = xi_{j-1} - xi_j and e_j = xi_j - xi_{j+1}.
std::vector<Complex> vertex_weights(const Polygon& poly);

/// mu_k = sum_j c_j xi_j^(k+2) / ((k+2)(k+1)).
MomentSequence moments_from_polygon(const Polygon& poly, std::size_t count);

/// s_k = k(k-1) mu_{k-2} = sum_j c_j xi_j^k for k = 0..n+1, so s_0 = s_1 = 0.
/// The noise level of s is heteroscedastic; the series carries its RMS.
SignalSeries moment_series(const MomentSequence& mom);

struct VertexRecovery {
  ExponentialModel vertices;  // nodes are vertex estimates (unordered)
  ClusterReport report;
};

/// Solves the exponential problem for s = moment_series(mom). Pseudo-noise of
/// deviation cfg.sigma_prime is added to the moments. With p_known the order
/// bound is p_known and the p_known largest-mass clusters are kept.
VertexRecovery vertices_from_moments(const MomentSequence& mom, const PseudosampleConfig& cfg,
                                     std::optional<std::size_t> p_known = std::nullopt);

/// Orders an unordered vertex set counterclockwise by angle about its centroid.
std::vector<Complex> order_vertices(std::span<const Complex> vertices);

}  // namespace ceap
