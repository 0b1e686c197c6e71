#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ceap {

using Complex = std::complex<double>;

/// Relative tolerance under which two nodes are considered the same.
inline constexpr double kNodeTolerance = 1e-8;

/// z^k by repeated squaring; 0^0 == 1 (std::pow(complex, int) is not
/// usable here because it goes through exp(k log z)).
Complex ipow(Complex z, std::size_t k) noexcept;

/// True when |a - b| <= kNodeTolerance * max(|a|, |b|).
bool same_node(Complex a, Complex b) noexcept;

/// Observed data a_0..a_{n-1} with complex Gaussian noise of deviation
/// sigma (E|nu|^2 = sigma^2) sampled every `dt` seconds.
class SignalSeries {
 public:
  SignalSeries() = default;
  explicit SignalSeries(std::vector<Complex> samples, double sigma = 0.0,
                        double dt = 1.0);

  std::span<const Complex> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const Complex& operator[](std::size_t k) const { return samples_[k]; }
  double sigma() const noexcept { return sigma_; }
  double dt() const noexcept { return dt_; }

  SignalSeries with_sigma(double sigma) const;

 private:
  std::vector<Complex> samples_;
  double sigma_ = 0.0;
  double dt_ = 1.0;
};

struct Term {
  Complex weight;
  Complex node;
};

/// s_k = sum_j c_j xi_j^k. Terms whose nodes coincide (same_node) are merged
/// on construction by summing their weights.
class ExponentialModel {
 public:
  ExponentialModel() = default;
  explicit ExponentialModel(std::vector<Term> terms);

  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t order() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  std::vector<Complex> nodes() const;
  std::vector<Complex> weights() const;

 private:
  std::vector<Term> terms_;
};

/// Values sum_j c_j xi_j^k for k = first, ..., first + count - 1.
std::vector<Complex> evaluate_model(const ExponentialModel& model,
                                    std::size_t first, std::size_t count);

struct ResidualReport {
  std::vector<Complex> residuals;
  std::size_t exceed_count = 0;  // |a_k - a^_k| > sigma, strictly
  double mse = 0.0;
};

ResidualReport residual_report(const SignalSeries& series,
                               const ExponentialModel& model);

}  // namespace ceap
