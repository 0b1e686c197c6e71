#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ceap/hankel_pencil.hpp"
#include "ceap/model.hpp"

namespace ceap {

/// z^d + coeffs[d-1] z^{d-1} + ... + coeffs[0]; coefficients stored in
/// ascending powers, coeffs()[degree()] == 1.
class MonicPolynomial {
 public:
  /// `lower` holds the d non-leading coefficients in ascending powers.
  explicit MonicPolynomial(std::vector<Complex> lower);

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  Complex operator()(Complex z) const noexcept;
  /// p, p', p'' at z by Horner's scheme.
  void evaluate(Complex z, Complex& p, Complex& dp, Complex& d2p) const noexcept;
  /// Quotient of synthetic division by (z - root).
  MonicPolynomial deflate(Complex root) const;
  double coefficient_norm() const noexcept;

 private:
  std::vector<Complex> coeffs_;
};

/// Rows {0..n-1} of the first segment and {n+q..2n+q-1} of the second.
/// gap == 0 means one contiguous block using every data row.
struct GapSpec {
  std::size_t segment_length = 0;
  std::size_t gap = 0;
};

/// First step of Prony's method: least-squares linear prediction
/// a_{i+p} + sum_k g_k a_{i+k} ~ 0 solved by dense QR. With a gap, `samples`
/// holds both segments back to back and only windows inside one segment
/// are used.
MonicPolynomial linear_prediction(std::span<const Complex> samples, std::size_t order,
                                  const GapSpec& gap = {});
MonicPolynomial linear_prediction(const SignalSeries& series, std::size_t order);

struct LaguerreOptions {
  int max_iterations = 80;
  double step_tolerance = 1e-12;      // |dz| <= tol (1 + |z|)
  double residual_tolerance = 1e-13;  // |p(z)| <= tol ||coeffs||
  double duplicate_tolerance = 1e-9;
};

/// Refines each warm start independently with Laguerre's iteration. Two
/// distinct starts converging onto one root are separated by re-running the
/// later start on the polynomial deflated by the earlier root.
/// Throws LaguerreFailure naming the first start that fails to converge.
std::vector<Complex> laguerre_roots(const MonicPolynomial& poly,
                                    std::span<const Complex> warm_starts,
                                    const LaguerreOptions& options = {});

/// Iterations used by the last converged run; exposed for tests.
int laguerre_iterations(const MonicPolynomial& poly, Complex start,
                        const LaguerreOptions& options = {});

/// Least-squares weights c of V c ~ data where V has rows xi^k over the row
/// powers implied by `gap`; solved with LSQR.
std::vector<Complex> vandermonde_weights(std::span<const Complex> nodes,
                                         std::span<const Complex> data,
                                         const GapSpec& gap = {});

/// Fast CEIP solve warm-started from `warm_starts`: linear prediction of
/// order min(p_tilde, warm pairs), Laguerre rooting, Vandermonde weights.
/// With a gap, `series` holds both segments and the model is indexed
/// globally.
ExponentialModel fast_ceip(const SignalSeries& series, const EigenSolution& warm_starts,
                           std::size_t p_tilde, const GapSpec& gap = {});

}  // namespace ceap
