#pragma once

#include <cstddef>
#include <vector>

#include "ceap/model.hpp"
#include "ceap/ptransform.hpp"

namespace ceap {

struct GapFill {
  std::vector<Complex> values;  // a^_n .. a^_{n+q-1}
  ClusterReport report;
};

/// Fills q missing samples between two observed segments of equal length n.
/// Each replication fits one prediction polynomial to the windows of both
/// segments, roots it from the warm starts of segment 1 and solves the
/// gapped Vandermonde system for the weights.
GapFill interpolate_gap(const SignalSeries& seg1, const SignalSeries& seg2, std::size_t q,
                        const PseudosampleConfig& cfg);

struct Extrapolation {
  std::vector<Complex> values;  // a^_n .. a^_{n+horizon-1}
  bool no_signal = false;       // p_hat == 0, values are zero
  ClusterReport report;
};

Extrapolation extrapolate(const SignalSeries& series, std::size_t horizon,
                          const PseudosampleConfig& cfg);

}  // namespace ceap
