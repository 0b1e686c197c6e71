#include "ceap/ptransform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "ceap/error.hpp"
#include "ceap/kmeans.hpp"
#include "ceap/parallel.hpp"
#include "ceap/prony.hpp"

namespace ceap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Largest even prefix; pencils need an even number of samples.
SignalSeries even_prefix(const SignalSeries& s) {
  if (s.size() % 2 == 0) return s;
  std::vector<Complex> head(s.samples().begin(), s.samples().end() - 1);
  return SignalSeries(std::move(head), s.sigma(), s.dt());
}

EigenSolution accurate_solve(const SignalSeries& s, std::size_t max_rank = 0) {
  const SignalSeries even = even_prefix(s);
  return solve_pencil(build_pencil(even), even, max_rank);
}

double residual_norm(const SignalSeries& s, const ExponentialModel& model) {
  const std::vector<Complex> fit = evaluate_model(model, 0, s.size());
  double sq = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) sq += std::norm(s[k] - fit[k]);
  return std::sqrt(sq);
}

// Lower median for even counts, so a duplicated point is returned exactly.
double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// RMS over median distance from the center of a circular 2-D Gaussian cloud.
constexpr double kMedianToRmsDistance = 1.2011224087864498;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct FlatTerm {
  Complex weight;
  Complex node;
};

std::vector<FlatTerm> flatten(const ReplicationSet& reps) {
  std::vector<FlatTerm> out;
  for (const ExponentialModel& m : reps.models)
    for (const Term& t : m.terms()) out.push_back({t.weight, t.node});
  return out;
}

Complex mesh_mass(std::span<const FlatTerm> terms, std::size_t replications, Complex center,
                  const Mesh& mesh) {
  const std::size_t m = mesh.size;
  const double delta = mesh.delta;
  const double half = 0.5 * static_cast<double>(m - 1);
  const double norm = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(replications));
  std::vector<Complex> f(m * m);
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t a = 0; a < m; ++a) {
      const Complex z = center + Complex{(static_cast<double>(a) - half) * delta,
                                         (static_cast<double>(b) - half) * delta};
      Complex acc{};
      for (const FlatTerm& t : terms) {
        double dist = std::abs(z - t.node);
        if (dist < 1e-14) dist = std::abs(z + delta * 1e-6 - t.node);
        acc += t.weight * std::log(dist);
      }
      f[b * m + a] = acc * norm;
    }
  }
  Complex total{};
  for (std::size_t b = 1; b + 1 < m; ++b) {
    for (std::size_t a = 1; a + 1 < m; ++a) {
      const std::size_t i = b * m + a;
      total += f[i - 1] + f[i + 1] + f[i - m] + f[i + m] - 4.0 * f[i];
    }
  }
  return total;
}

void shrink_to(Mesh& mesh, double target) {
  while (mesh.size > 3 && mesh.half_width() > target) mesh.size -= 2;
  if (mesh.half_width() > target) mesh.delta = target;
}

void separate_meshes(std::vector<Cluster>& clusters) {
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      const Complex d = clusters[a].centroid - clusters[b].centroid;
      const double dist = std::max(std::abs(d.real()), std::abs(d.imag()));
      if (clusters[a].mesh.half_width() + clusters[b].mesh.half_width() < dist) continue;
      const double target = 0.45 * dist;
      shrink_to(clusters[a].mesh, target);
      shrink_to(clusters[b].mesh, target);
    }
  }
}

void compute_masses(const ReplicationSet& reps, ClusterReport& report) {
  const std::vector<FlatTerm> terms = flatten(reps);
  const std::size_t r = std::max<std::size_t>(1, reps.models.size());
  for (Cluster& c : report.clusters) {
    c.laplacian_mass = mesh_mass(terms, r, c.centroid, c.mesh);
    Complex sum{};
    for (const MemberRef& m : c.members)
      sum += reps.models[m.replication].terms()[m.term].weight;
    c.direct_mass = sum / static_cast<double>(r);
  }
}

void finish_estimates(const ReplicationSet& reps, ClusterReport& report) {
  std::vector<Term> terms;
  report.p_hat = 0;
  for (Cluster& c : report.clusters) {
    if (!c.selected) continue;
    ++report.p_hat;
    Complex weight{}, node{};
    std::size_t k = 0;
    for (const MemberRef& m : c.members) {
      const Term& t = reps.models[m.replication].terms()[m.term];
      ++k;
      weight += (t.weight - weight) / static_cast<double>(k);
      node += (t.node - node) / static_cast<double>(k);
    }
    c.estimate = {weight, node};
    terms.push_back(c.estimate);
  }
  report.estimates = ExponentialModel(std::move(terms));
}

}  // namespace

double PseudosampleConfig::sigma_tilde(double sigma) const {
  return std::sqrt(sigma * sigma + sigma_prime * sigma_prime);
}

void PseudosampleConfig::validate() const {
  if (replications < 1) throw InvalidInput("R must be at least 1");
  if (!(sigma_prime >= 0.0) || !std::isfinite(sigma_prime))
    throw InvalidInput("sigma' must be finite and non-negative");
  if (!(selection_constant > 1.0)) throw InvalidInput("K must be greater than 1");
  if (mesh_size < 3 || mesh_size % 2 == 0) throw InvalidInput("mesh size must be odd and >= 3");
  if (mesh_delta && !(*mesh_delta > 0.0)) throw InvalidInput("mesh spacing must be positive");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

std::vector<SignalSeries> generate_pseudosamples(const SignalSeries& series,
                                                 const PseudosampleConfig& cfg) {
  cfg.validate();
  const double component = cfg.sigma_prime / std::numbers::sqrt2;
  const double sigma_tilde = cfg.sigma_tilde(series.sigma());
  std::vector<SignalSeries> out;
  out.reserve(cfg.replications);
  for (std::size_t r = 0; r < cfg.replications; ++r) {
    std::vector<Complex> samples(series.samples().begin(), series.samples().end());
    if (cfg.sigma_prime > 0.0) {
      std::mt19937_64 rng(stream_seed(cfg.seed, r));
      std::normal_distribution<double> normal(0.0, component);
      for (Complex& a : samples) {
        const double re = normal(rng);
        const double im = normal(rng);
        a += Complex{re, im};
      }
    }
    out.emplace_back(std::move(samples), sigma_tilde, series.dt());
  }
  return out;
}

ReplicationSet solve_replications(const SignalSeries& base_series,
                                  std::span<const SignalSeries> samples,
                                  const PseudosampleConfig& cfg) {
  cfg.validate();
  const std::size_t n_even = base_series.size() & ~std::size_t{1};
  if (n_even < 2) throw InvalidInput("series must hold at least 2 samples");
  const std::size_t p_max = n_even / 2;
  const std::size_t p_tilde = cfg.p_tilde == 0 ? p_max : cfg.p_tilde;
  if (p_tilde > p_max) throw InvalidInput("p~ must not exceed n/2");
  for (const SignalSeries& s : samples)
    if (s.size() != base_series.size()) throw InvalidInput("samples of differing lengths");

  ReplicationSet reps;
  const std::size_t cap = cfg.subspace_truncation ? p_tilde : 0;
  reps.base = truncate_by_weight(accurate_solve(base_series, cap), p_tilde);
  if (reps.base.pairs.empty())
    throw NumericalFailure("accurate solve of the data produced no eigenpairs");
  const std::size_t p = reps.base.size();

  auto slow = [&](const SignalSeries& s) {
    return truncate_by_weight(accurate_solve(s, cap), p).to_model();
  };

  reps.models.resize(samples.size());
  if (cfg.path == SolverPath::kSlow) {
    parallel_for(samples.size(), [&](std::size_t r) { reps.models[r] = slow(samples[r]); });
    return reps;
  }

  // A fast model that fits its pseudosample clearly worse than the base
  // model does counts as a failure.
  const ExponentialModel base_model = reps.base.to_model();
  std::vector<char> failed(samples.size(), 0);
  parallel_for(samples.size(), [&](std::size_t r) {
    try {
      reps.models[r] = fast_ceip(samples[r], reps.base, p);
      const double fit = residual_norm(samples[r], reps.models[r]);
      if (!(fit <= kFastResidualFactor * residual_norm(samples[r], base_model))) failed[r] = 1;
    } catch (const NumericalFailure&) {
      failed[r] = 1;
    }
  });
  for (std::size_t r = 0; r < samples.size(); ++r)
    if (failed[r]) reps.failures.push_back(r);

  if (5 * reps.failures.size() > samples.size()) {
    reps.switched_to_slow = true;
    parallel_for(samples.size(), [&](std::size_t r) { reps.models[r] = slow(samples[r]); });
  } else {
    parallel_for(reps.failures.size(), [&](std::size_t i) {
      const std::size_t r = reps.failures[i];
      reps.models[r] = slow(samples[r]);
    });
  }
  return reps;
}

ReplicationSet solve_replications(const SignalSeries& series, const PseudosampleConfig& cfg) {
  const std::vector<SignalSeries> samples = generate_pseudosamples(series, cfg);
  return solve_replications(series, samples, cfg);
}

ClusterReport cluster_solutions(const ReplicationSet& reps, const PseudosampleConfig& cfg) {
  cfg.validate();
  if (reps.base.pairs.empty()) throw InvalidInput("replication set has no base solution");

  // Feature weight w balancing node geometry against |c|.
  const auto& base = reps.base.pairs;
  Complex mean_node{};
  double mean_mag = 0.0;
  for (std::size_t j = 0; j < base.size(); ++j) {
    mean_node += (base[j].node - mean_node) / static_cast<double>(j + 1);
    mean_mag += (std::abs(base[j].weight) - mean_mag) / static_cast<double>(j + 1);
  }
  double node_var = 0.0, mag_var = 0.0;
  for (const EigenPair& e : base) {
    node_var += std::norm(e.node - mean_node);
    const double dm = std::abs(e.weight) - mean_mag;
    mag_var += dm * dm;
  }
  double w = 1.0;
  if (node_var > 0.0 && mag_var > 0.0) w = std::min(1.0, std::sqrt(node_var / mag_var));
  if (!std::isfinite(w) || w <= 0.0) w = 1.0;

  auto feature = [w](Complex node, Complex weight) {
    return Eigen::Vector3d(node.real(), node.imag(), w * std::abs(weight));
  };

  std::vector<Eigen::Vector3d> points;
  std::vector<MemberRef> refs;
  for (std::size_t r = 0; r < reps.models.size(); ++r) {
    const auto terms = reps.models[r].terms();
    for (std::size_t j = 0; j < terms.size(); ++j) {
      points.push_back(feature(terms[j].node, terms[j].weight));
      refs.push_back({r, j});
    }
  }
  if (points.empty()) throw NumericalFailure("no replication terms to cluster");

  std::vector<Eigen::Vector3d> init;
  for (const EigenPair& e : base) init.push_back(feature(e.node, e.weight));
  const KMeansResult km = kmeans(points, std::move(init));

  ClusterReport report;
  std::vector<std::vector<MemberRef>> members(km.centroids.size());
  for (std::size_t i = 0; i < points.size(); ++i) members[km.assignment[i]].push_back(refs[i]);
  for (std::size_t k = 0; k < km.centroids.size(); ++k) {
    if (members[k].empty()) continue;
    const Complex centroid{km.centroids[k](0), km.centroids[k](1)};
    auto same = std::find_if(report.clusters.begin(), report.clusters.end(),
                             [&](const Cluster& c) { return c.centroid == centroid; });
    if (same != report.clusters.end()) {
      same->members.insert(same->members.end(), members[k].begin(), members[k].end());
      continue;
    }
    Cluster c;
    c.centroid = centroid;
    c.members = std::move(members[k]);
    report.clusters.push_back(std::move(c));
  }

  // Meshes sit at the component-wise median of the member nodes, with a
  // median-based spread, so that a few stray members cannot move them off
  // the cloud.
  for (Cluster& c : report.clusters) {
    std::vector<double> re, im, dist;
    for (const MemberRef& m : c.members) {
      const Complex z = reps.models[m.replication].terms()[m.term].node;
      re.push_back(z.real());
      im.push_back(z.imag());
    }
    c.centroid = {median(re), median(im)};
    for (const MemberRef& m : c.members)
      dist.push_back(std::abs(reps.models[m.replication].terms()[m.term].node - c.centroid));
    c.spread = kMedianToRmsDistance * median(dist);
    c.mesh.size = cfg.mesh_size;
    c.mesh.delta = cfg.mesh_delta.value_or(std::max(1e-3, c.spread / 3.0));
  }
  separate_meshes(report.clusters);
  return report;
}

Complex laplacian_mass(const ReplicationSet& reps, Complex center, const Mesh& mesh) {
  if (mesh.size < 3 || mesh.size % 2 == 0) throw InvalidInput("mesh size must be odd and >= 3");
  if (!(mesh.delta > 0.0)) throw InvalidInput("mesh spacing must be positive");
  const std::vector<FlatTerm> terms = flatten(reps);
  return mesh_mass(terms, std::max<std::size_t>(1, reps.models.size()), center, mesh);
}

Complex laplacian_mass(const ReplicationSet& reps, Complex center,
                       const PseudosampleConfig& cfg) {
  return laplacian_mass(reps, center, Mesh{cfg.mesh_size, cfg.mesh_delta.value_or(1e-3)});
}

ClusterReport select_and_estimate(const ReplicationSet& reps, ClusterReport clusters,
                                  const SignalSeries& series, const PseudosampleConfig& cfg) {
  cfg.validate();
  compute_masses(reps, clusters);
  const double threshold = cfg.selection_constant * series.sigma();
  for (Cluster& c : clusters.clusters) c.selected = std::abs(c.laplacian_mass) > threshold;
  finish_estimates(reps, clusters);
  return clusters;
}

ClusterReport select_largest(const ReplicationSet& reps, ClusterReport clusters,
                             std::size_t count) {
  compute_masses(reps, clusters);
  std::vector<std::size_t> order(clusters.clusters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(clusters.clusters[a].laplacian_mass) >
           std::abs(clusters.clusters[b].laplacian_mass);
  });
  for (std::size_t i = 0; i < order.size(); ++i)
    clusters.clusters[order[i]].selected = i < count;
  finish_estimates(reps, clusters);
  return clusters;
}

PTransformResult ptransform_estimate(const SignalSeries& series, const PseudosampleConfig& cfg,
                                     std::optional<std::size_t> keep_largest) {
  PTransformResult out;
  auto t0 = std::chrono::steady_clock::now();
  out.replications = solve_replications(series, cfg);
  out.timings.replications_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  ClusterReport clusters = cluster_solutions(out.replications, cfg);
  out.timings.clustering_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  out.report = keep_largest ? select_largest(out.replications, std::move(clusters), *keep_largest)
                            : select_and_estimate(out.replications, std::move(clusters), series, cfg);
  out.timings.selection_s = seconds_since(t0);

  out.residuals = residual_report(series, out.report.estimates);
  return out;
}

ClusterReport estimate_from_replicates(std::span<const SignalSeries> samples,
                                       const PseudosampleConfig& cfg) {
  if (samples.empty()) throw InvalidInput("need at least one sample");
  const std::size_t n = samples.front().size();
  std::vector<Complex> mean(n, Complex{});
  for (std::size_t r = 0; r < samples.size(); ++r) {
    if (samples[r].size() != n) throw InvalidInput("samples of differing lengths");
    for (std::size_t k = 0; k < n; ++k)
      mean[k] += (samples[r][k] - mean[k]) / static_cast<double>(r + 1);
  }
  const SignalSeries& first = samples.front();
  const SignalSeries base(std::move(mean), first.sigma(), first.dt());
  PseudosampleConfig real = cfg;
  real.sigma_prime = 0.0;
  real.replications = samples.size();
  const ReplicationSet reps = solve_replications(base, samples, real);
  return select_and_estimate(reps, cluster_solutions(reps, real), first, real);
}

SweepResult sweep_hyperparameters(const SignalSeries& series,
                                  std::span<const PseudosampleConfig> grid) {
  if (grid.empty()) throw InvalidInput("hyperparameter grid is empty");
  SweepResult result;
  std::optional<std::size_t> best;
  for (const PseudosampleConfig& cfg : grid) {
    SweepRow row;
    row.config = cfg;
    try {
      const PTransformResult r = ptransform_estimate(series, cfg);
      row.ok = true;
      row.exceed_count = r.residuals.exceed_count;
      row.mse = r.residuals.mse;
      row.p_hat = r.report.p_hat;
    } catch (const Error& e) {
      row.error = e.what();
    }
    result.table.push_back(row);
    if (!row.ok) continue;
    const std::size_t idx = result.table.size() - 1;
    if (!best) {
      best = idx;
      continue;
    }
    const SweepRow& b = result.table[*best];
    const auto key = [](const SweepRow& s) { return std::tuple(s.exceed_count, s.p_hat, s.mse); };
    if (key(row) < key(b)) best = idx;
  }
  if (!best) {
    std::string msg = "every configuration failed:";
    for (std::size_t i = 0; i < result.table.size(); ++i)
      msg += "\n  [" + std::to_string(i) + "] " + result.table[i].error;
    throw NumericalFailure(msg);
  }
  result.best_index = *best;
  result.best = result.table[*best].config;
  return result;
}

}  // namespace ceap
