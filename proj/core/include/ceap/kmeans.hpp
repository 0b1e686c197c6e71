#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ceap {

struct KMeansResult {
  std::vector<Eigen::Vector3d> centroids;
  std::vector<std::size_t> assignment;  // cluster index per point
  int iterations = 0;
};

/// Lloyd iterations from the given initial centroids until the assignment
/// is stable or `max_iterations` is reached. An emptied cluster is reseeded
/// at the point farthest from its current centroid.
KMeansResult kmeans(std::span<const Eigen::Vector3d> points,
                    std::vector<Eigen::Vector3d> initial, int max_iterations = 100);

}  // namespace ceap
