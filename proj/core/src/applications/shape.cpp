#include "ceap/applications/shape.hpp"

#include <algorithm>
#include <cmath>

#include "ceap/error.hpp"

namespace ceap {

Polygon::Polygon(std::vector<Complex> vertices) : vertices_(std::move(vertices)) {
  const std::size_t p = vertices_.size();
  if (p < 3) throw InvalidInput("polygon needs at least 3 vertices");
  for (const Complex& v : vertices_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidInput("non-finite vertex");
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (vertices_[i] == vertices_[j]) throw InvalidInput("coincident vertices");

  double area2 = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const Complex a = vertices_[j];
    const Complex b = vertices_[(j + 1) % p];
    area2 += a.real() * b.imag() - b.real() * a.imag();
    const Complex e0 = a - vertices_[(j + p - 1) % p];
    const Complex e1 = b - a;
    const double cross = e0.real() * e1.imag() - e0.imag() * e1.real();
    if (std::abs(cross) <= 1e-14 * std::abs(e0) * std::abs(e1))
      throw InvalidInput("collinear consecutive vertices");
  }
  if (area2 <= 0.0) throw InvalidInput("vertices must be in counterclockwise order");
}

const Complex& Polygon::operator[](std::ptrdiff_t j) const {
  const auto p = static_cast<std::ptrdiff_t>(vertices_.size());
  return vertices_[static_cast<std::size_t>(((j % p) + p) % p)];
}

std::vector<Complex> vertex_weights(const Polygon& poly) {
  const Complex half_i{0.0, 0.5};
  std::vector<Complex> c(poly.size());
  for (std::size_t j = 0; j < poly.size(); ++j) {
    const auto jj = static_cast<std::ptrdiff_t>(j);
    const Complex e0 = poly[jj - 1] - poly[jj];
    const Complex e1 = poly[jj] - poly[jj + 1];
    c[j] = half_i * (std::conj(e0) / e0 - std::conj(e1) / e1);
  }
  return c;
}

MomentSequence moments_from_polygon(const Polygon& poly, std::size_t count) {
  const std::vector<Complex> c = vertex_weights(poly);
  MomentSequence out;
  out.moments.assign(count, Complex{});
  for (std::size_t k = 0; k < count; ++k) {
    Complex s{};
    for (std::size_t j = 0; j < poly.size(); ++j) s += c[j] * ipow(poly.vertices()[j], k + 2);
    out.moments[k] = s / static_cast<double>((k + 2) * (k + 1));
  }
  return out;
}

SignalSeries moment_series(const MomentSequence& mom) {
  if (mom.moments.empty()) throw InvalidInput("no moments");
  const std::size_t n = mom.moments.size() + 2;
  std::vector<Complex> s(n);
  double sq = 0.0;
  for (std::size_t k = 2; k < n; ++k) {
    const double f = static_cast<double>(k) * static_cast<double>(k - 1);
    s[k] = f * mom.moments[k - 2];
    sq += f * f;
  }
  return SignalSeries(std::move(s), mom.sigma * std::sqrt(sq / static_cast<double>(n)));
}

VertexRecovery vertices_from_moments(const MomentSequence& mom, const PseudosampleConfig& cfg,
                                     std::optional<std::size_t> p_known) {
  const SignalSeries s = moment_series(mom);
  PseudosampleConfig run = cfg;
  if (p_known) {
    if (*p_known == 0) throw InvalidInput("vertex count must be positive");
    if (2 * *p_known > (s.size() & ~std::size_t{1}))
      throw InvalidInput("fewer moments than twice the vertex count");
    run.p_tilde = *p_known;
    run.path = SolverPath::kSlow;
    run.subspace_truncation = true;
  }
  const std::vector<SignalSeries> pseudo_moments =
      generate_pseudosamples(SignalSeries(mom.moments, mom.sigma), run);
  std::vector<SignalSeries> samples;
  samples.reserve(pseudo_moments.size());
  for (const SignalSeries& pm : pseudo_moments) {
    const std::span<const Complex> v = pm.samples();
    samples.push_back(moment_series({{v.begin(), v.end()}, pm.sigma()}));
  }
  const ReplicationSet reps = solve_replications(s, samples, run);
  ClusterReport clusters = cluster_solutions(reps, run);
  VertexRecovery out;
  out.report = p_known ? select_largest(reps, std::move(clusters), *p_known)
                       : select_and_estimate(reps, std::move(clusters), s, run);
  out.vertices = out.report.estimates;
  return out;
}

std::vector<Complex> order_vertices(std::span<const Complex> vertices) {
  std::vector<Complex> out(vertices.begin(), vertices.end());
  if (out.empty()) return out;
  Complex centroid{};
  for (const Complex& v : out) centroid += v;
  centroid /= static_cast<double>(out.size());
  std::stable_sort(out.begin(), out.end(), [centroid](const Complex& a, const Complex& b) {
    return std::arg(a - centroid) < std::arg(b - centroid);
  });
  return out;
}

}  // namespace ceap
