#include "ceap/applications/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "ceap/error.hpp"

namespace ceap {

double SpectralLine::fwhm_hz() const noexcept { return decay_rate / std::numbers::pi; }

SignalSeries passband_filter(const SignalSeries& series, double f_lo, double f_hi,
                             std::size_t decimate) {
  if (!(f_lo >= 0.0 && f_lo < f_hi && f_hi <= 1.0))
    throw InvalidInput("pass-band must satisfy 0 <= f_lo < f_hi <= 1");
  const std::size_t n = series.size();
  if (decimate == 0 || n % decimate != 0)
    throw InvalidInput("decimation factor must divide the series length");

  std::vector<Complex> time(series.samples().begin(), series.samples().end());
  std::vector<Complex> freq;
  Eigen::FFT<double> fft;
  fft.fwd(freq, time);
  for (std::size_t b = 0; b < n; ++b) {
    const double f = static_cast<double>(b) / static_cast<double>(n);
    if (f < f_lo || f >= f_hi) freq[b] = Complex{};
  }
  fft.inv(time, freq);

  const bool full_band = f_lo == 0.0 && f_hi == 1.0;
  const double center = 0.5 * (f_lo + f_hi);
  std::vector<Complex> out;
  out.reserve(n / decimate);
  for (std::size_t k = 0; k < n; k += decimate) {
    Complex v = time[k];
    if (!full_band) {
      const double turns = std::fmod(center * static_cast<double>(k), 1.0);
      v *= std::polar(1.0, -2.0 * std::numbers::pi * turns);
    }
    out.push_back(v);
  }
  return SignalSeries(std::move(out), series.sigma() * std::sqrt(f_hi - f_lo),
                      series.dt() * static_cast<double>(decimate));
}

SignalSeries trim_series(const SignalSeries& series, std::size_t head, std::size_t tail) {
  if (head + tail + 2 > series.size()) throw InvalidInput("trimming leaves fewer than 2 samples");
  const auto s = series.samples();
  return SignalSeries(std::vector<Complex>(s.begin() + static_cast<std::ptrdiff_t>(head),
                                           s.end() - static_cast<std::ptrdiff_t>(tail)),
                      series.sigma(), series.dt());
}

ExponentialModel shift_origin(const ExponentialModel& model, std::size_t shift) {
  std::vector<Term> terms;
  for (const Term& t : model.terms()) {
    if (shift > 0 && std::abs(t.node) == 0.0) throw InvalidInput("zero node cannot be shifted");
    terms.push_back({t.weight / ipow(t.node, shift), t.node});
  }
  return ExponentialModel(std::move(terms));
}

std::vector<SpectralLine> lines_from_model(const ExponentialModel& model, double dt,
                                           std::optional<double> reference_hz,
                                           double offset_hz) {
  if (!(dt > 0.0)) throw InvalidInput("sampling interval must be positive");
  if (reference_hz && !(*reference_hz > 0.0))
    throw InvalidInput("reference frequency must be positive");
  std::vector<SpectralLine> out;
  for (const Term& t : model.terms()) {
    if (std::abs(t.node) == 0.0) throw InvalidInput("zero node has no spectral line");
    SpectralLine line;
    line.frequency_hz = std::arg(t.node) / (2.0 * std::numbers::pi * dt) + offset_hz;
    line.decay_rate = -std::log(std::abs(t.node)) / dt;
    line.area = std::abs(t.weight);
    line.phase = std::arg(t.weight);
    if (reference_hz) line.mode_ppm = 1e6 * line.frequency_hz / *reference_hz;
    out.push_back(line);
  }
  return out;
}

std::vector<double> area_ratios(std::span<const SpectralLine> lines) {
  if (lines.empty()) return {};
  const auto smallest = std::min_element(
      lines.begin(), lines.end(),
      [](const SpectralLine& a, const SpectralLine& b) { return a.area < b.area; });
  if (!(smallest->area > 0.0)) throw InvalidInput("line with zero area");
  std::vector<double> out;
  for (const SpectralLine& l : lines) out.push_back(l.area / smallest->area);
  return out;
}

}  // namespace ceap
