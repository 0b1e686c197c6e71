#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ceap/hankel_pencil.hpp"
#include "ceap/model.hpp"

namespace ceap {

enum class SolverPath { kFast, kSlow };

/// Hyperparameters of the pseudosample estimator.
struct PseudosampleConfig {
  std::size_t replications = 64;       // R
  double sigma_prime = 0.0;            // deviation of the added pseudo-noise
  std::uint64_t seed = 0;
  std::size_t p_tilde = 0;             // upper bound on the order; 0 = n/2
  double selection_constant = 3.0;     // K > 1 in |mass| > K sigma
  std::size_t mesh_size = 7;           // odd, points per side
  std::optional<double> mesh_delta;    // unset = max(1e-3, member spread / 3)
  SolverPath path = SolverPath::kFast;
  bool subspace_truncation = false;    // cap accurate pencils at rank p~

  /// sqrt(sigma^2 + sigma_prime^2) for data noise `sigma`.
  double sigma_tilde(double sigma) const;
  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

/// Seed of the random stream for replication `stream`: splitmix64 applied
/// to seed and stream, so results do not depend on thread scheduling.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// R copies a_k + nu_k^(r), nu complex Gaussian with E|nu|^2 = sigma_prime^2.
/// Replication r draws from std::mt19937_64(stream_seed(seed, r)).
std::vector<SignalSeries> generate_pseudosamples(const SignalSeries& series,
                                                 const PseudosampleConfig& cfg);

struct ReplicationSet {
  EigenSolution base;                   // accurate r = 0 solve, truncated to p~
  std::vector<ExponentialModel> models;  // one per replication
  std::vector<std::size_t> failures;    // replications that fell back to the slow path
  bool switched_to_slow = false;        // fast path abandoned for the whole run
};

/// A fast-path model whose residual on its pseudosample exceeds this many
/// times the base model's residual there is a failure.
inline constexpr double kFastResidualFactor = 2.0;

/// Solves the r = 0 problem accurately, then each pseudosample by the fast
/// warm-started path (or the slow accurate path). More than 20% fast-path
/// failures switch the whole run to the slow path.
ReplicationSet solve_replications(const SignalSeries& series, const PseudosampleConfig& cfg);

/// Same, with caller-provided samples in place of pseudosamples; the base
/// problem is `base_series`.
ReplicationSet solve_replications(const SignalSeries& base_series,
                                  std::span<const SignalSeries> samples,
                                  const PseudosampleConfig& cfg);

struct MemberRef {
  std::size_t replication;
  std::size_t term;
};

struct Mesh {
  std::size_t size = 7;
  double delta = 1e-3;

  double half_width() const noexcept {
    return 0.5 * static_cast<double>(size - 1) * delta;
  }
};

struct Cluster {
  Complex centroid;  // component-wise median of the member nodes
  std::vector<MemberRef> members;
  double spread = 0.0;  // 1.2011 x median member distance from the centroid
  Mesh mesh;
  Complex laplacian_mass;
  Complex direct_mass;
  bool selected = false;
  Term estimate;  // member means, set for selected clusters
};

struct ClusterReport {
  std::vector<Cluster> clusters;
  std::size_t p_hat = 0;
  ExponentialModel estimates;
};

/// k-means over (Re xi, Im xi, w |c|) initialized at the base pairs, with
/// w = min(1, spread of base nodes / spread of base |c|). Assigns each cluster a
/// mesh and shrinks meshes so that no two overlap.
ClusterReport cluster_solutions(const ReplicationSet& reps, const PseudosampleConfig& cfg);

/// Sum over interior mesh points of the 5-point Laplacian of
/// F(z) = (1 / 2 pi R) sum_r sum_j c_j^(r) log|z - xi_j^(r)|, times delta^2.
Complex laplacian_mass(const ReplicationSet& reps, Complex center, const Mesh& mesh);
/// Uses cfg.mesh_size and cfg.mesh_delta (1e-3 when unset).
Complex laplacian_mass(const ReplicationSet& reps, Complex center,
                       const PseudosampleConfig& cfg);

/// Computes masses and selects clusters with |laplacian_mass| > K sigma;
/// estimates are member means over the selected clusters.
ClusterReport select_and_estimate(const ReplicationSet& reps, ClusterReport clusters,
                                  const SignalSeries& series, const PseudosampleConfig& cfg);

/// Keeps the `count` clusters of largest |laplacian_mass| instead of
/// thresholding.
ClusterReport select_largest(const ReplicationSet& reps, ClusterReport clusters,
                             std::size_t count);

struct StageTimings {
  double replications_s = 0.0;
  double clustering_s = 0.0;
  double selection_s = 0.0;
};

struct PTransformResult {
  ClusterReport report;
  ResidualReport residuals;
  ReplicationSet replications;
  StageTimings timings;
};

/// solve_replications -> cluster_solutions -> select -> residuals on 0..n-1.
/// With `keep_largest` set, selection keeps that many clusters.
PTransformResult ptransform_estimate(const SignalSeries& series, const PseudosampleConfig& cfg,
                                     std::optional<std::size_t> keep_largest = std::nullopt);

/// Pipeline over independent real samples of the same process (no
/// pseudo-noise). The base problem is the sample mean.
ClusterReport estimate_from_replicates(std::span<const SignalSeries> samples,
                                       const PseudosampleConfig& cfg);

struct SweepRow {
  PseudosampleConfig config;
  bool ok = false;
  std::size_t exceed_count = 0;
  double mse = 0.0;
  std::size_t p_hat = 0;
  std::string error;
};

struct SweepResult {
  PseudosampleConfig best;
  std::size_t best_index = 0;
  std::vector<SweepRow> table;
};

/// Runs every configuration; best minimizes exceed_count, then p_hat, then mse.
SweepResult sweep_hyperparameters(const SignalSeries& series,
                                  std::span<const PseudosampleConfig> grid);

}  // namespace ceap
