#include "ceap/hankel_pencil.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "ceap/error.hpp"

namespace ceap {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Nearest power of two to 1/x, so scaling is exact in floating point.
double inverse_pow2(double x) {
  int e = 0;
  std::frexp(x, &e);
  return std::ldexp(1.0, -e + 1);
}

// Row/column scalings dl, dr such that max(|A_ij|, |B_ij|) of
// diag(dl) [A, B] diag(dr) is close to 1 in every row and column.
void equilibrate(const MatrixXcd& a, const MatrixXcd& b, VectorXd& dl, VectorXd& dr) {
  const Eigen::Index m = a.rows();
  dl = VectorXd::Ones(m);
  dr = VectorXd::Ones(m);
  for (int sweep = 0; sweep < 8; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      double r = 0.0;
      for (Eigen::Index j = 0; j < m; ++j)
        r = std::max({r, std::abs(a(i, j)) * dr(j), std::abs(b(i, j)) * dr(j)});
      r *= dl(i);
      if (r > 0.0 && std::isfinite(r)) {
        const double f = inverse_pow2(r);
        if (f != 1.0) {
          dl(i) *= f;
          changed = true;
        }
      }
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      double c = 0.0;
      for (Eigen::Index i = 0; i < m; ++i)
        c = std::max({c, std::abs(a(i, j)) * dl(i), std::abs(b(i, j)) * dl(i)});
      c *= dr(j);
      if (c > 0.0 && std::isfinite(c)) {
        const double f = inverse_pow2(c);
        if (f != 1.0) {
          dr(j) *= f;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
}

struct GevResult {
  VectorXcd alpha;
  VectorXcd beta;
  MatrixXcd vectors;
};

GevResult complex_qz(MatrixXcd a, MatrixXcd b) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  GevResult out{VectorXcd(m), VectorXcd(m), MatrixXcd(m, m)};
  std::complex<double> vl_dummy;
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', m, a.data(), m,
                                        b.data(), m, out.alpha.data(), out.beta.data(),
                                        &vl_dummy, 1, out.vectors.data(), m);
  if (info != 0)
    throw NumericalFailure("QZ iteration failed (zggev info " + std::to_string(info) + ")");
  return out;
}

// Column of powers xi^0..xi^{rows-1}, divided by max(1,|xi|)^(rows-1) so
// that it stays finite for |xi| > 1. Returns the divisor through `scale`.
VectorXcd power_column(Complex xi, Eigen::Index rows, double& scale) {
  const double r = std::max(1.0, std::abs(xi));
  const Complex step = xi / r;
  const double last = static_cast<double>(rows - 1);
  scale = std::pow(r, last);
  VectorXcd col(rows);
  Complex pw{1.0, 0.0};
  for (Eigen::Index k = 0; k < rows; ++k) {
    col(k) = r == 1.0 ? pw : pw * std::pow(r, static_cast<double>(k) - last);
    pw *= step;
  }
  return col;
}

std::vector<Complex> joint_weights(std::span<const Complex> nodes,
                                   std::span<const Complex> samples) {
  const Eigen::Index rows = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(nodes.size());
  MatrixXcd v(rows, cols);
  std::vector<double> scales(nodes.size());
  for (Eigen::Index j = 0; j < cols; ++j) v.col(j) = power_column(nodes[j], rows, scales[j]);
  VectorXcd rhs(rows);
  for (Eigen::Index k = 0; k < rows; ++k) rhs(k) = samples[k];
  const VectorXcd c = v.colPivHouseholderQr().solve(rhs);
  std::vector<Complex> out(nodes.size());
  for (Eigen::Index j = 0; j < cols; ++j) out[j] = c(j) / scales[j];
  return out;
}

}  // namespace

HankelPencil build_pencil(std::span<const Complex> s) {
  if (s.size() < 2) throw InvalidInput("series must hold at least 2 samples");
  if (s.size() % 2 != 0) throw InvalidInput("series length must be even");
  const Eigen::Index m = static_cast<Eigen::Index>(s.size() / 2);
  HankelPencil p{MatrixXcd(m, m), MatrixXcd(m, m), s.size()};
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      p.u0(i, j) = s[i + j];
      p.u1(i, j) = s[i + j + 1];
    }
  }
  return p;
}

HankelPencil build_pencil(const SignalSeries& series) {
  return build_pencil(series.samples());
}

std::vector<Complex> EigenSolution::nodes() const {
  std::vector<Complex> out;
  out.reserve(pairs.size());
  for (const EigenPair& p : pairs) out.push_back(p.node);
  return out;
}

ExponentialModel EigenSolution::to_model() const {
  std::vector<Term> terms;
  terms.reserve(pairs.size());
  for (const EigenPair& p : pairs) terms.push_back({p.weight, p.node});
  return ExponentialModel(std::move(terms));
}

EigenSolution solve_pencil(const HankelPencil& pencil, const SignalSeries& series,
                           std::size_t max_rank) {
  const Eigen::Index m = pencil.u0.rows();
  if (series.size() < static_cast<std::size_t>(2 * m))
    throw InvalidInput("series shorter than the pencil it should match");
  EigenSolution sol;

  VectorXd dl, dr;
  equilibrate(pencil.u1, pencil.u0, dl, dr);
  const MatrixXcd a = dl.asDiagonal() * pencil.u1 * dr.asDiagonal();
  const MatrixXcd b = dl.asDiagonal() * pencil.u0 * dr.asDiagonal();

  Eigen::BDCSVD<MatrixXcd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  if (m > 0 && sv(0) > 0.0) {
    while (rank < m && sv(rank) > kPencilRankTolerance * sv(0)) ++rank;
  }
  if (max_rank > 0) rank = std::min(rank, static_cast<Eigen::Index>(max_rank));
  for (Eigen::Index k = rank; k < m; ++k)
    sol.excluded.push_back({Complex{}, Complex{}, ExclusionReason::kRankDeficient});
  if (rank == 0) return sol;

  // Project onto the leading singular subspaces of U0; for full rank this is
  // an exact change of basis.
  const MatrixXcd ur = svd.matrixU().leftCols(rank);
  const MatrixXcd vr = svd.matrixV().leftCols(rank);
  const MatrixXcd ar = ur.adjoint() * a * vr;
  const MatrixXcd br = sv.head(rank).cast<Complex>().asDiagonal();
  const GevResult gev = complex_qz(ar, br);

  const double a_norm = ar.norm();
  const double b_norm = br.norm();
  const double tiny = 64.0 * std::numeric_limits<double>::epsilon();
  std::vector<Complex> nodes;
  std::vector<VectorXcd> vectors;
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Complex alpha = gev.alpha(k);
    const Complex beta = gev.beta(k);
    const bool alpha_zero = std::abs(alpha) <= tiny * a_norm;
    const bool beta_zero = std::abs(beta) <= tiny * b_norm;
    if (alpha_zero && beta_zero) {
      sol.excluded.push_back({alpha, beta, ExclusionReason::kIndeterminate});
      continue;
    }
    const Complex xi = alpha / beta;
    if (beta_zero || !std::isfinite(xi.real()) || !std::isfinite(xi.imag())) {
      sol.excluded.push_back({alpha, beta, ExclusionReason::kInfinite});
      continue;
    }
    nodes.push_back(xi);
    vectors.push_back(dr.cast<Complex>().asDiagonal() * (vr * gev.vectors.col(k)));
  }

  // c_j = u^T s_head / (V^T u)_j, computed on power columns scaled to stay finite.
  const auto samples = series.samples();
  VectorXcd head(m);
  for (Eigen::Index k = 0; k < m; ++k) head(k) = samples[k];
  std::vector<Complex> weights(nodes.size());
  bool ill_conditioned = false;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    double scale = 1.0;
    const VectorXcd t = power_column(nodes[j], m, scale);
    const VectorXcd& u = vectors[j];
    const Complex denom = t.transpose() * u;
    const double cosine = std::abs(denom) / (t.norm() * u.norm());
    if (!(cosine > 1e-8)) {
      ill_conditioned = true;
      break;
    }
    const Complex numer = head.transpose() * u;
    weights[j] = numer / denom / scale;
    if (!std::isfinite(weights[j].real()) || !std::isfinite(weights[j].imag())) {
      ill_conditioned = true;
      break;
    }
  }
  PairQuality q = PairQuality::kEigenvector;
  if (ill_conditioned && !nodes.empty()) {
    weights = joint_weights(nodes, samples.first(2 * static_cast<std::size_t>(m)));
    q = PairQuality::kLeastSquares;
  }
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    sol.pairs.push_back({nodes[j], weights[j]});
    sol.quality.push_back(q);
  }
  return sol;
}

EigenSolution truncate_by_weight(const EigenSolution& sol, std::size_t p_tilde) {
  std::vector<std::size_t> order(sol.pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(sol.pairs[a].weight) > std::abs(sol.pairs[b].weight);
  });
  if (order.size() > p_tilde) order.resize(p_tilde);
  EigenSolution out;
  out.excluded = sol.excluded;
  for (std::size_t idx : order) {
    out.pairs.push_back(sol.pairs[idx]);
    out.quality.push_back(sol.quality[idx]);
  }
  return out;
}

}  // namespace ceap
