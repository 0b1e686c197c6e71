#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ceap/condensed_density.hpp"
#include "ceap/model.hpp"
#include "ceap/ptransform.hpp"

namespace ceap {

enum class SeriesFormat { kCsv, kJson };

/// ".json" selects JSON, anything else CSV.
SeriesFormat format_from_path(const std::filesystem::path& path);

/// CSV: rows "re,im", optional header row. JSON: {"sigma", "dt", "samples": [[re, im], ...]}.
/// Malformed input throws InvalidInput naming the line and column.
SignalSeries parse_series(std::string_view text, SeriesFormat format);
SignalSeries read_series(const std::filesystem::path& path, SeriesFormat format);
SignalSeries read_series(const std::filesystem::path& path);

std::string format_series(const SignalSeries& series, SeriesFormat format);
void write_series(const SignalSeries& series, const std::filesystem::path& path,
                  SeriesFormat format);

/// "re im" per line; blank lines and lines starting with '#' are skipped.
std::vector<Complex> parse_complex_list(std::string_view text);
std::vector<Complex> read_complex_list(const std::filesystem::path& path);
void write_complex_list(std::span<const Complex> values, const std::filesystem::path& path);

/// Header "nx ny x_min x_max y_min y_max", then ny rows of nx values.
void write_density_grid(const DensityMap& map, const std::filesystem::path& path);
DensityMap read_density_grid(const std::filesystem::path& path);

struct RunManifest {
  std::string config_json = "{}";  // snapshot of the effective configuration
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
  std::vector<std::size_t> failures;
  bool switched_to_slow = false;
};

struct ResultTerm {
  Complex weight;
  Complex node;
  Complex cluster_mass;
  std::size_t member_count = 0;
};

/// Parsed form of a results document.
struct ResultsDocument {
  int schema_version = 0;
  std::size_t p_hat = 0;
  std::vector<ResultTerm> terms;
  std::size_t exceed_count = 0;
  double mse = 0.0;
  std::string manifest_json;
};

inline constexpr int kResultsSchemaVersion = 1;

/// Manifest as a JSON object.
std::string format_manifest(const RunManifest& manifest);

/// Terms are the selected clusters in report order.
std::string format_results(const ClusterReport& report, const ResidualReport& residuals,
                           const RunManifest& manifest);
void write_results(const ClusterReport& report, const ResidualReport& residuals,
                   const RunManifest& manifest, const std::filesystem::path& path);
ResultsDocument parse_results(std::string_view text);
ResultsDocument read_results(const std::filesystem::path& path);

/// Whole file as a string; throws Error when unreadable.
std::string read_text(const std::filesystem::path& path);
/// Throws Error when the file cannot be written.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace ceap
