#include "ceap/prony.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ceap/error.hpp"
#include "ceap/lsqr.hpp"

namespace ceap {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MonicPolynomial::MonicPolynomial(std::vector<Complex> lower) : coeffs_(std::move(lower)) {
  coeffs_.push_back(Complex{1.0, 0.0});
}

Complex MonicPolynomial::operator()(Complex z) const noexcept {
  Complex p = coeffs_.back();
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) p = p * z + coeffs_[k];
  return p;
}

void MonicPolynomial::evaluate(Complex z, Complex& p, Complex& dp,
                               Complex& d2p) const noexcept {
  p = coeffs_.back();
  dp = Complex{};
  d2p = Complex{};
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
    d2p = d2p * z + dp;
    dp = dp * z + p;
    p = p * z + coeffs_[k];
  }
  d2p *= 2.0;
}

MonicPolynomial MonicPolynomial::deflate(Complex root) const {
  const std::size_t d = degree();
  if (d == 0) throw InvalidInput("cannot deflate a constant polynomial");
  // q_{d-1} = 1, q_{k} = a_{k+1} + root q_{k+1}
  std::vector<Complex> q(d);
  q[d - 1] = Complex{1.0, 0.0};
  for (std::size_t k = d - 1; k-- > 0;) q[k] = coeffs_[k + 1] + root * q[k + 1];
  q.pop_back();
  return MonicPolynomial(std::move(q));
}

double MonicPolynomial::coefficient_norm() const noexcept {
  double s = 0.0;
  for (const Complex& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

MonicPolynomial linear_prediction(std::span<const Complex> a, std::size_t order,
                                  const GapSpec& gap) {
  const std::size_t n = a.size();
  if (order == 0) throw InvalidInput("prediction order must be positive");
  // Window starts: every start inside one observed block.
  std::vector<std::size_t> starts;
  if (gap.gap == 0) {
    if (n < 2 * order) throw InvalidInput("insufficient data for order");
    for (std::size_t i = 0; i + order < n; ++i) starts.push_back(i);
  } else {
    const std::size_t m = gap.segment_length;
    if (n != 2 * m) throw InvalidInput("gapped data must hold two segments");
    if (m <= order || 2 * (m - order) < order) throw InvalidInput("insufficient data for order");
    for (std::size_t i = 0; i + order < m; ++i) {
      starts.push_back(i);
      starts.push_back(m + i);
    }
  }
  const auto rows = static_cast<Eigen::Index>(starts.size());
  const auto cols = static_cast<Eigen::Index>(order);
  MatrixXcd h(rows, cols);
  VectorXcd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::size_t s0 = starts[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < cols; ++k) h(i, k) = a[s0 + static_cast<std::size_t>(k)];
    rhs(i) = -a[s0 + order];
  }
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(h);
  qr.setThreshold(1e-13);
  if (qr.rank() < cols) throw NumericalFailure("degenerate prediction system");
  const VectorXcd g = qr.solve(rhs);
  std::vector<Complex> lower(g.data(), g.data() + g.size());
  for (const Complex& c : lower) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw NumericalFailure("degenerate prediction system");
  }
  return MonicPolynomial(std::move(lower));
}

MonicPolynomial linear_prediction(const SignalSeries& series, std::size_t order) {
  return linear_prediction(series.samples(), order);
}

namespace {

// Returns the number of iterations, or -1 if not converged.
int laguerre_run(const MonicPolynomial& poly, Complex& z, const LaguerreOptions& opt) {
  const double d = static_cast<double>(poly.degree());
  const double residual_floor = opt.residual_tolerance * poly.coefficient_norm();
  for (int it = 0; it < opt.max_iterations; ++it) {
    Complex p, dp, d2p;
    poly.evaluate(z, p, dp, d2p);
    if (std::abs(p) <= residual_floor) return it;
    const Complex g = dp / p;
    const Complex h = g * g - d2p / p;
    const Complex sq = std::sqrt((d - 1.0) * (d * h - g * g));
    const Complex den = std::abs(g + sq) >= std::abs(g - sq) ? g + sq : g - sq;
    Complex step;
    if (std::abs(den) > 0.0) {
      step = d / den;
    } else {
      // stationary point: kick off it
      step = (1.0 + std::abs(z)) * std::polar(1.0, static_cast<double>(it + 1));
    }
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return -1;
    if (std::abs(step) <= opt.step_tolerance * (1.0 + std::abs(z))) return it + 1;
  }
  return -1;
}

}  // namespace

int laguerre_iterations(const MonicPolynomial& poly, Complex start,
                        const LaguerreOptions& options) {
  return laguerre_run(poly, start, options);
}

std::vector<Complex> laguerre_roots(const MonicPolynomial& poly,
                                    std::span<const Complex> warm_starts,
                                    const LaguerreOptions& options) {
  if (warm_starts.size() != poly.degree())
    throw InvalidInput("need one warm start per root");
  std::vector<Complex> roots(warm_starts.begin(), warm_starts.end());
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (laguerre_run(poly, roots[j], options) < 0)
      throw LaguerreFailure(j, "Laguerre iteration did not converge for start " +
                                   std::to_string(j));
  }
  for (std::size_t j = 1; j < roots.size(); ++j) {
    MonicPolynomial working = poly;
    for (std::size_t attempt = 0; attempt < roots.size(); ++attempt) {
      auto clash = std::find_if(roots.begin(), roots.begin() + j, [&](Complex r) {
        return std::abs(r - roots[j]) <= options.duplicate_tolerance;
      });
      if (clash == roots.begin() + j) break;
      const std::size_t i = static_cast<std::size_t>(clash - roots.begin());
      if (warm_starts[i] == warm_starts[j]) break;
      if (working.degree() < 2) break;
      working = working.deflate(*clash);
      Complex z = warm_starts[j];
      if (laguerre_run(working, z, options) < 0)
        throw LaguerreFailure(j, "Laguerre iteration did not converge after deflation for start " +
                                     std::to_string(j));
      roots[j] = z;
    }
  }
  return roots;
}

namespace {

std::vector<std::size_t> row_powers(std::size_t data_size, const GapSpec& gap) {
  std::vector<std::size_t> rows;
  if (gap.gap == 0) {
    rows.resize(data_size);
    for (std::size_t k = 0; k < data_size; ++k) rows[k] = k;
    return rows;
  }
  const std::size_t n = gap.segment_length;
  if (data_size != 2 * n)
    throw InvalidInput("gapped weight solve needs two segments of segment_length samples");
  rows.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) rows.push_back(k);
  for (std::size_t k = 0; k < n; ++k) rows.push_back(n + gap.gap + k);
  return rows;
}

}  // namespace

std::vector<Complex> vandermonde_weights(std::span<const Complex> nodes,
                                         std::span<const Complex> data,
                                         const GapSpec& gap) {
  const std::vector<std::size_t> powers = row_powers(data.size(), gap);
  if (nodes.size() > powers.size()) throw InvalidInput("underdetermined weight system");
  if (nodes.empty()) return {};
  const Eigen::Index rows = static_cast<Eigen::Index>(powers.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(nodes.size());
  const double top = static_cast<double>(powers.back());

  // Columns divided by max(1,|xi|)^top so large nodes stay finite.
  MatrixXcd v(rows, cols);
  std::vector<double> scales(nodes.size());
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Complex xi = nodes[j];
    const double r = std::max(1.0, std::abs(xi));
    scales[j] = std::pow(r, top);
    const Complex step = xi / r;
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double k = static_cast<double>(powers[i]);
      Complex entry = ipow(step, powers[i]);
      if (r != 1.0) entry *= std::pow(r, k - top);
      v(i, j) = entry;
    }
  }
  VectorXcd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) b(i) = data[i];

  LsqrResult sol = lsqr(v, b);
  // One refinement sweep on the residual recovers digits lost to the
  // conditioning of the Vandermonde columns.
  const VectorXcd r = b - v * sol.x;
  sol.x += lsqr(v, r).x;

  std::vector<Complex> out(nodes.size());
  for (Eigen::Index j = 0; j < cols; ++j) out[j] = sol.x(j) / scales[j];
  return out;
}

ExponentialModel fast_ceip(const SignalSeries& series, const EigenSolution& warm_starts,
                           std::size_t p_tilde, const GapSpec& gap) {
  const std::size_t p = std::min(p_tilde, warm_starts.size());
  if (p == 0) throw InvalidInput("fast CEIP needs at least one warm start");
  const MonicPolynomial poly = linear_prediction(series.samples(), p, gap);
  std::vector<Complex> starts(p);
  for (std::size_t j = 0; j < p; ++j) starts[j] = warm_starts.pairs[j].node;
  const std::vector<Complex> nodes = laguerre_roots(poly, starts);
  const std::vector<Complex> weights = vandermonde_weights(nodes, series.samples(), gap);
  std::vector<Term> terms(p);
  for (std::size_t j = 0; j < p; ++j) terms[j] = {weights[j], nodes[j]};
  return ExponentialModel(std::move(terms));
}

}  // namespace ceap
