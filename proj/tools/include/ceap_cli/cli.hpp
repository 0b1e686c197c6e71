#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ceap/condensed_density.hpp"
#include "ceap/ptransform.hpp"

namespace ceap::cli {

inline constexpr int kConfigSchemaVersion = 1;

/// Effective parameters of one command. Keys of a JSON config file and of
/// the manifest snapshot are the field names below.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  std::string in;
  std::string in2;  // second segment (interpolate), weights (design)
  std::string out;  // results document or primary output file
  std::string grid_out = "density.txt";
  std::string values_out;
  std::optional<double> sigma;  // overrides the noise level of the input
  std::optional<double> dt;

  std::size_t replications = 64;
  std::optional<double> sigma_prime;  // unset: equal to the data sigma
  std::uint64_t seed = 0;
  std::size_t p_tilde = 0;
  double selection_constant = 3.0;
  std::size_t mesh_size = 7;
  std::optional<double> mesh_delta;
  std::string path = "fast";

  std::vector<double> grid{-2.0, 2.0, -2.0, 2.0, 81.0, 81.0};
  std::string signal = "file";  // "zero" for the pure-noise density
  std::size_t n = 20;

  std::size_t count = 20;
  std::optional<std::size_t> p_known;
  std::size_t gap = 0;
  std::size_t horizon = 0;
  double f_lo = 0.0;
  double f_hi = 1.0;
  std::size_t decimate = 1;
  std::optional<double> reference_hz;
  double offset_hz = 0.0;

  std::vector<std::size_t> sweep_replications;
  std::vector<double> sweep_sigma_prime;
  std::vector<std::size_t> sweep_p_tilde;
  std::vector<double> sweep_selection_constant;

  double radius = 0.1;
  std::vector<double> design_sigmas;
  std::vector<std::size_t> design_ns;

  /// Pseudosample configuration for data noise `data_sigma`.
  PseudosampleConfig pseudosample(double data_sigma) const;
  Lattice lattice() const;
};

/// Applies the keys of a JSON object onto `cfg`; unknown keys and
/// mistyped values throw InvalidInput.
void apply_config_json(RunConfig& cfg, const std::string& json_text);
std::string config_to_json(const RunConfig& cfg);

/// Runs one subcommand. Returns 0 on success, 1 on usage or input errors,
/// 2 on numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ceap::cli
