#include "ceap/kmeans.hpp"

#include <limits>

#include "ceap/error.hpp"

namespace ceap {

namespace {

std::size_t nearest(const Eigen::Vector3d& x, const std::vector<Eigen::Vector3d>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    const double d = (x - centroids[k]).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

// Running means keep the centroid of identical points exactly equal to them.
void update_centroids(std::span<const Eigen::Vector3d> points,
                      const std::vector<std::size_t>& assignment,
                      std::vector<Eigen::Vector3d>& centroids, std::vector<std::size_t>& counts) {
  std::vector<Eigen::Vector3d> next(centroids.size(), Eigen::Vector3d::Zero());
  counts.assign(centroids.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t k = assignment[i];
    ++counts[k];
    next[k] += (points[i] - next[k]) / static_cast<double>(counts[k]);
  }
  for (std::size_t k = 0; k < centroids.size(); ++k)
    if (counts[k] > 0) centroids[k] = next[k];
}

}  // namespace

KMeansResult kmeans(std::span<const Eigen::Vector3d> points,
                    std::vector<Eigen::Vector3d> initial, int max_iterations) {
  if (initial.empty()) throw InvalidInput("k-means needs at least one initial centroid");
  KMeansResult result;
  result.centroids = std::move(initial);
  const std::size_t k = result.centroids.size();
  result.assignment.assign(points.size(), 0);
  if (points.empty()) return result;

  std::vector<std::size_t> counts(k, 0);
  bool first = true;
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = first;
    first = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = nearest(points[i], result.centroids);
      if (c != result.assignment[i]) {
        result.assignment[i] = c;
        changed = true;
      }
    }
    counts.assign(k, 0);
    for (std::size_t a : result.assignment) ++counts[a];
    // Reseed empty clusters while some cluster can spare a point.
    for (std::size_t e = 0; e < k; ++e) {
      if (counts[e] != 0) continue;
      double far_d = -1.0;
      std::size_t far_i = points.size();
      for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t a = result.assignment[i];
        if (counts[a] < 2) continue;
        const double d = (points[i] - result.centroids[a]).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far_i = i;
        }
      }
      if (far_i == points.size()) break;
      --counts[result.assignment[far_i]];
      result.assignment[far_i] = e;
      counts[e] = 1;
      result.centroids[e] = points[far_i];
      changed = true;
    }
    update_centroids(points, result.assignment, result.centroids, counts);
    result.iterations = it + 1;
    if (!changed) break;
  }
  return result;
}

}  // namespace ceap
