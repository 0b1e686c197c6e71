#include "ceap/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ceap/error.hpp"

namespace ceap {

Complex ipow(Complex z, std::size_t k) noexcept {
  Complex result{1.0, 0.0};
  while (k != 0) {
    if (k & 1u) result *= z;
    k >>= 1u;
    if (k != 0) z *= z;
  }
  return result;
}

bool same_node(Complex a, Complex b) noexcept {
  if (a == b) return true;
  return std::abs(a - b) <= kNodeTolerance * std::max(std::abs(a), std::abs(b));
}

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

SignalSeries::SignalSeries(std::vector<Complex> samples, double sigma, double dt)
    : samples_(std::move(samples)), sigma_(sigma), dt_(dt) {
  if (!(sigma_ >= 0.0) || !std::isfinite(sigma_))
    throw InvalidInput("sigma must be finite and non-negative");
  if (!(dt_ > 0.0) || !std::isfinite(dt_))
    throw InvalidInput("dt must be finite and positive");
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if (!finite(samples_[k]))
      throw InvalidInput("sample " + std::to_string(k) + " is not finite");
  }
}

SignalSeries SignalSeries::with_sigma(double sigma) const {
  return SignalSeries(samples_, sigma, dt_);
}

ExponentialModel::ExponentialModel(std::vector<Term> terms) {
  terms_.reserve(terms.size());
  for (const Term& t : terms) {
    if (!finite(t.weight) || !finite(t.node))
      throw InvalidInput("exponential model terms must be finite");
    auto it = std::find_if(terms_.begin(), terms_.end(),
                           [&](const Term& u) { return same_node(u.node, t.node); });
    if (it == terms_.end())
      terms_.push_back(t);
    else
      it->weight += t.weight;
  }
}

std::vector<Complex> ExponentialModel::nodes() const {
  std::vector<Complex> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) out.push_back(t.node);
  return out;
}

std::vector<Complex> ExponentialModel::weights() const {
  std::vector<Complex> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) out.push_back(t.weight);
  return out;
}

std::vector<Complex> evaluate_model(const ExponentialModel& model,
                                    std::size_t first, std::size_t count) {
  std::vector<Complex> out(count, Complex{});
  for (const Term& t : model.terms()) {
    Complex power = ipow(t.node, first);
    for (std::size_t k = 0; k < count; ++k) {
      out[k] += t.weight * power;
      power *= t.node;
    }
  }
  return out;
}

ResidualReport residual_report(const SignalSeries& series,
                               const ExponentialModel& model) {
  ResidualReport report;
  const std::size_t n = series.size();
  const std::vector<Complex> fitted = evaluate_model(model, 0, n);
  report.residuals.resize(n);
  double sum_sq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    report.residuals[k] = series[k] - fitted[k];
    const double mag = std::abs(report.residuals[k]);
    if (mag > series.sigma()) ++report.exceed_count;
    sum_sq += mag * mag;
  }
  report.mse = n == 0 ? 0.0 : sum_sq / static_cast<double>(n);
  return report;
}

}  // namespace ceap
