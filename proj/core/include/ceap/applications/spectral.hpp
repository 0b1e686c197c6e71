#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ceap/model.hpp"

namespace ceap {

/// Lorentzian line of a free induction decay term c exp((-alpha + i omega) t).
struct SpectralLine {
  double frequency_hz = 0.0;
  double decay_rate = 0.0;  // alpha, 1/s
  double area = 0.0;        // |c|
  double phase = 0.0;       // arg c
  std::optional<double> mode_ppm;

  /// Full width at half maximum of the absorption line.
  double fwhm_hz() const noexcept;
};

/// Keeps DFT bins with f_lo <= b/n < f_hi (normalized frequency), returns to
/// the time domain, shifts the band center to zero frequency (skipped for
/// the full band) and keeps samples 0, d, 2d, ... Output sigma is scaled by
/// sqrt(f_hi - f_lo) and dt by d.
SignalSeries passband_filter(const SignalSeries& series, double f_lo, double f_hi,
                             std::size_t decimate);

/// Samples head .. n - tail - 1, e.g. to drop the ringing a brick-wall
/// filter leaves at the ends of a decaying record.
SignalSeries trim_series(const SignalSeries& series, std::size_t head, std::size_t tail);

/// Weights referred back by `shift` samples, c_j xi_j^-shift, for a model
/// fitted to a series that starts `shift` samples late.
ExponentialModel shift_origin(const ExponentialModel& model, std::size_t shift);

/// Line parameters per term: frequency arg(xi) / (2 pi dt) + offset_hz,
/// decay -ln|xi| / dt, area |c|, phase arg c; ppm relative to reference_hz.
std::vector<SpectralLine> lines_from_model(const ExponentialModel& model, double dt,
                                           std::optional<double> reference_hz = std::nullopt,
                                           double offset_hz = 0.0);

/// Areas divided by the smallest area, in input order.
std::vector<double> area_ratios(std::span<const SpectralLine> lines);

}  // namespace ceap
