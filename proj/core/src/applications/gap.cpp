#include "ceap/applications/gap.hpp"

#include <cmath>

#include "ceap/error.hpp"
#include "ceap/parallel.hpp"
#include "ceap/prony.hpp"

namespace ceap {

namespace {

SignalSeries slice(const SignalSeries& s, std::size_t first, std::size_t count) {
  std::vector<Complex> v(s.samples().begin() + static_cast<std::ptrdiff_t>(first),
                         s.samples().begin() + static_cast<std::ptrdiff_t>(first + count));
  return SignalSeries(std::move(v), s.sigma(), s.dt());
}

EigenSolution accurate(const SignalSeries& seg, std::size_t p) {
  const SignalSeries even = slice(seg, 0, seg.size() & ~std::size_t{1});
  return truncate_by_weight(solve_pencil(build_pencil(even), even), p);
}

ExponentialModel gapped_model(std::span<const Complex> nodes, std::span<const Complex> pooled,
                              const GapSpec& gap) {
  const std::vector<Complex> c = vandermonde_weights(nodes, pooled, gap);
  std::vector<Term> terms;
  for (std::size_t j = 0; j < nodes.size(); ++j) terms.push_back({c[j], nodes[j]});
  return ExponentialModel(std::move(terms));
}

}  // namespace

GapFill interpolate_gap(const SignalSeries& seg1, const SignalSeries& seg2, std::size_t q,
                        const PseudosampleConfig& cfg) {
  cfg.validate();
  if (seg1.size() != seg2.size()) throw InvalidInput("segments must have equal length");
  GapFill out;
  if (q == 0) return out;
  const std::size_t n = seg1.size();
  const std::size_t p_max = (n & ~std::size_t{1}) / 2;
  if (p_max == 0) throw InvalidInput("segments must hold at least 2 samples");
  const std::size_t p = cfg.p_tilde == 0 ? p_max : cfg.p_tilde;
  if (p > p_max) throw InvalidInput("p~ must not exceed n/2");

  std::vector<Complex> joined(seg1.samples().begin(), seg1.samples().end());
  joined.insert(joined.end(), seg2.samples().begin(), seg2.samples().end());
  const double sigma = std::sqrt(0.5 * (seg1.sigma() * seg1.sigma() + seg2.sigma() * seg2.sigma()));
  const SignalSeries pooled(std::move(joined), sigma, seg1.dt());
  const GapSpec gap{n, q};

  const EigenSolution base1 = accurate(seg1, p);
  if (base1.pairs.empty()) throw NumericalFailure("accurate solve of a segment produced no eigenpairs");

  ReplicationSet reps;
  {
    const std::vector<Complex> nodes = base1.nodes();
    const std::vector<Complex> c = vandermonde_weights(nodes, pooled.samples(), gap);
    for (std::size_t j = 0; j < nodes.size(); ++j) reps.base.pairs.push_back({nodes[j], c[j]});
    reps.base.quality.assign(nodes.size(), PairQuality::kLeastSquares);
  }

  const std::vector<SignalSeries> pseudo = generate_pseudosamples(pooled, cfg);
  const std::size_t R = pseudo.size();
  reps.models.resize(R);

  auto slow = [&](std::size_t r) {
    const std::vector<Complex> nodes = accurate(slice(pseudo[r], 0, n), p).nodes();
    reps.models[r] = gapped_model(nodes, pseudo[r].samples(), gap);
  };

  if (cfg.path == SolverPath::kSlow) {
    parallel_for(R, slow);
  } else {
    std::vector<char> failed(R, 0);
    parallel_for(R, [&](std::size_t r) {
      try {
        reps.models[r] = fast_ceip(pseudo[r], reps.base, p, gap);
      } catch (const NumericalFailure&) {
        failed[r] = 1;
      }
    });
    for (std::size_t r = 0; r < R; ++r)
      if (failed[r]) reps.failures.push_back(r);
    if (5 * reps.failures.size() > R) {
      reps.switched_to_slow = true;
      parallel_for(R, slow);
    } else {
      parallel_for(reps.failures.size(), [&](std::size_t i) { slow(reps.failures[i]); });
    }
  }

  ClusterReport clusters = cluster_solutions(reps, cfg);
  out.report = select_and_estimate(reps, std::move(clusters), pooled, cfg);
  out.values = evaluate_model(out.report.estimates, n, q);
  return out;
}

Extrapolation extrapolate(const SignalSeries& series, std::size_t horizon,
                          const PseudosampleConfig& cfg) {
  PTransformResult res = ptransform_estimate(series, cfg);
  Extrapolation out;
  out.report = std::move(res.report);
  out.no_signal = out.report.p_hat == 0;
  out.values = evaluate_model(out.report.estimates, series.size(), horizon);
  return out;
}

}  // namespace ceap
