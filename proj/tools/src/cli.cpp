#include "ceap_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ceap/applications/gap.hpp"
#include "ceap/applications/shape.hpp"
#include "ceap/applications/spectral.hpp"
#include "ceap/error.hpp"
#include "ceap/io.hpp"
#include "ceap/version.hpp"

namespace ceap::cli {

namespace {

using nlohmann::json;

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw InvalidInput("config key '" + key + "' has the wrong type");
  }
}

template <class T>
void set_optional(std::optional<T>& field, const json& v, const std::string& key) {
  if (v.is_null())
    field.reset();
  else
    field = get_as<T>(v, key);
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

template <class T>
Setter plain(T RunConfig::*field) {
  return [field](RunConfig& c, const json& v, const std::string& key) {
    c.*field = get_as<T>(v, key);
  };
}

template <class T>
Setter optional(std::optional<T> RunConfig::*field) {
  return [field](RunConfig& c, const json& v, const std::string& key) {
    set_optional(c.*field, v, key);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"schema_version", plain(&RunConfig::schema_version)},
      {"in", plain(&RunConfig::in)},
      {"in2", plain(&RunConfig::in2)},
      {"out", plain(&RunConfig::out)},
      {"grid_out", plain(&RunConfig::grid_out)},
      {"values_out", plain(&RunConfig::values_out)},
      {"sigma", optional(&RunConfig::sigma)},
      {"dt", optional(&RunConfig::dt)},
      {"replications", plain(&RunConfig::replications)},
      {"sigma_prime", optional(&RunConfig::sigma_prime)},
      {"seed", plain(&RunConfig::seed)},
      {"p_tilde", plain(&RunConfig::p_tilde)},
      {"selection_constant", plain(&RunConfig::selection_constant)},
      {"mesh_size", plain(&RunConfig::mesh_size)},
      {"mesh_delta", optional(&RunConfig::mesh_delta)},
      {"path", plain(&RunConfig::path)},
      {"grid", plain(&RunConfig::grid)},
      {"signal", plain(&RunConfig::signal)},
      {"n", plain(&RunConfig::n)},
      {"count", plain(&RunConfig::count)},
      {"p_known", optional(&RunConfig::p_known)},
      {"gap", plain(&RunConfig::gap)},
      {"horizon", plain(&RunConfig::horizon)},
      {"f_lo", plain(&RunConfig::f_lo)},
      {"f_hi", plain(&RunConfig::f_hi)},
      {"decimate", plain(&RunConfig::decimate)},
      {"reference_hz", optional(&RunConfig::reference_hz)},
      {"offset_hz", plain(&RunConfig::offset_hz)},
      {"sweep_replications", plain(&RunConfig::sweep_replications)},
      {"sweep_sigma_prime", plain(&RunConfig::sweep_sigma_prime)},
      {"sweep_p_tilde", plain(&RunConfig::sweep_p_tilde)},
      {"sweep_selection_constant", plain(&RunConfig::sweep_selection_constant)},
      {"radius", plain(&RunConfig::radius)},
      {"design_sigmas", plain(&RunConfig::design_sigmas)},
      {"design_ns", plain(&RunConfig::design_ns)},
  };
  return table;
}

void apply_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw InvalidInput("unknown config key '" + key + "'");
    it->second(cfg, value, key);
  }
  if (cfg.schema_version != kConfigSchemaVersion)
    throw InvalidInput("unsupported config schema_version " + std::to_string(cfg.schema_version));
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json config_json(const RunConfig& c) {
  return {{"schema_version", c.schema_version},
          {"in", c.in},
          {"in2", c.in2},
          {"out", c.out},
          {"grid_out", c.grid_out},
          {"values_out", c.values_out},
          {"sigma", opt_json(c.sigma)},
          {"dt", opt_json(c.dt)},
          {"replications", c.replications},
          {"sigma_prime", opt_json(c.sigma_prime)},
          {"seed", c.seed},
          {"p_tilde", c.p_tilde},
          {"selection_constant", c.selection_constant},
          {"mesh_size", c.mesh_size},
          {"mesh_delta", opt_json(c.mesh_delta)},
          {"path", c.path},
          {"grid", c.grid},
          {"signal", c.signal},
          {"n", c.n},
          {"count", c.count},
          {"p_known", opt_json(c.p_known)},
          {"gap", c.gap},
          {"horizon", c.horizon},
          {"f_lo", c.f_lo},
          {"f_hi", c.f_hi},
          {"decimate", c.decimate},
          {"reference_hz", opt_json(c.reference_hz)},
          {"offset_hz", c.offset_hz},
          {"sweep_replications", c.sweep_replications},
          {"sweep_sigma_prime", c.sweep_sigma_prime},
          {"sweep_p_tilde", c.sweep_p_tilde},
          {"sweep_selection_constant", c.sweep_selection_constant},
          {"radius", c.radius},
          {"design_sigmas", c.design_sigmas},
          {"design_ns", c.design_ns}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::string& require_in(const RunConfig& cfg) {
  if (cfg.in.empty()) throw InvalidInput("missing input path (--in)");
  return cfg.in;
}

std::string out_or(const RunConfig& cfg, const char* fallback) {
  return cfg.out.empty() ? fallback : cfg.out;
}

std::string values_or(const RunConfig& cfg, const char* fallback) {
  return cfg.values_out.empty() ? fallback : cfg.values_out;
}

SignalSeries load_series(const RunConfig& cfg, const std::string& path) {
  SignalSeries s = read_series(path);
  const double sigma = cfg.sigma.value_or(s.sigma());
  const double dt = cfg.dt.value_or(s.dt());
  return SignalSeries(std::vector<Complex>(s.samples().begin(), s.samples().end()), sigma, dt);
}

RunManifest manifest_for(const RunConfig& cfg) {
  RunManifest m;
  m.config_json = config_json(cfg).dump();
  m.seed = cfg.seed;
  m.version = kVersion;
  return m;
}

void add_timings(RunManifest& m, const StageTimings& t) {
  m.timings = {{"replications_s", t.replications_s},
               {"clustering_s", t.clustering_s},
               {"selection_s", t.selection_s}};
}

std::string summary_numbers(const ClusterReport& report, const ResidualReport& res) {
  std::ostringstream ss;
  ss << "p_hat=" << report.p_hat << " exceed_count=" << res.exceed_count << " mse=" << res.mse;
  return ss.str();
}

// Residuals of a gapped fit over both segments.
ResidualReport gapped_residuals(const SignalSeries& seg1, const SignalSeries& seg2,
                                std::size_t q, const ExponentialModel& model) {
  ResidualReport r1 = residual_report(seg1, model);
  std::vector<Term> shifted;
  for (const Term& t : model.terms())
    shifted.push_back({t.weight * ipow(t.node, seg1.size() + q), t.node});
  const ResidualReport r2 = residual_report(seg2, ExponentialModel(std::move(shifted)));
  const double n1 = static_cast<double>(seg1.size()), n2 = static_cast<double>(seg2.size());
  r1.residuals.insert(r1.residuals.end(), r2.residuals.begin(), r2.residuals.end());
  r1.exceed_count += r2.exceed_count;
  r1.mse = (r1.mse * n1 + r2.mse * n2) / (n1 + n2);
  return r1;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const SignalSeries series = load_series(cfg, require_in(cfg));
  const PTransformResult res = ptransform_estimate(series, cfg.pseudosample(series.sigma()));
  RunManifest m = manifest_for(cfg);
  add_timings(m, res.timings);
  m.failures = res.replications.failures;
  m.switched_to_slow = res.replications.switched_to_slow;
  const std::string path = out_or(cfg, "results.json");
  write_results(res.report, res.residuals, m, path);
  out << "estimate: " << summary_numbers(res.report, res.residuals) << " -> " << path << "\n";
  return 0;
}

int cmd_density(const RunConfig& cfg, std::ostream& out) {
  SignalSeries signal = [&] {
    if (cfg.signal == "zero")
      return SignalSeries(std::vector<Complex>(cfg.n), cfg.sigma.value_or(1.0));
    if (cfg.signal != "file") throw InvalidInput("signal must be 'zero' or 'file'");
    return load_series(cfg, require_in(cfg));
  }();
  const auto t0 = std::chrono::steady_clock::now();
  const DensityMap map = condensed_density_map(signal, cfg.lattice());
  RunManifest m = manifest_for(cfg);
  m.timings = {{"density_s", seconds_since(t0)}};
  write_density_grid(map, cfg.grid_out);
  json doc = {{"schema_version", kResultsSchemaVersion},
              {"total_mass", map.total_mass},
              {"grid_file", cfg.grid_out},
              {"manifest", json::parse(format_manifest(m))}};
  const std::string path = out_or(cfg, "density.json");
  write_text(path, doc.dump(2) + "\n");
  out << "density: total_mass=" << map.total_mass << " -> " << cfg.grid_out << "\n";
  return 0;
}

int cmd_design(const RunConfig& cfg, std::ostream& out) {
  const std::vector<Complex> nodes = read_complex_list(require_in(cfg));
  std::vector<Complex> weights(nodes.size(), Complex{1.0, 0.0});
  if (!cfg.in2.empty()) weights = read_complex_list(cfg.in2);
  if (weights.size() != nodes.size()) throw InvalidInput("node and weight counts differ");
  if (cfg.design_sigmas.empty() || cfg.design_ns.empty())
    throw InvalidInput("design needs --sigmas and --ns");
  std::vector<Term> terms;
  for (std::size_t j = 0; j < nodes.size(); ++j) terms.push_back({weights[j], nodes[j]});
  const DesignCandidate cand{ExponentialModel(std::move(terms)), {cfg.radius}};
  const std::vector<DesignRow> rows =
      design_experiment(std::span(&cand, 1), cfg.design_sigmas, cfg.design_ns, cfg.lattice());
  json table = json::array();
  std::size_t ok = 0;
  for (const DesignRow& r : rows) {
    table.push_back({{"sigma", r.sigma}, {"n", r.n}, {"identifiable", r.identifiable}});
    ok += r.identifiable;
  }
  json doc = {{"schema_version", kResultsSchemaVersion},
              {"rows", table},
              {"manifest", json::parse(format_manifest(manifest_for(cfg)))}};
  const std::string path = out_or(cfg, "design.json");
  write_text(path, doc.dump(2) + "\n");
  out << "design: " << ok << " of " << rows.size() << " settings identifiable -> " << path << "\n";
  return 0;
}

int cmd_interpolate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.in2.empty()) throw InvalidInput("missing second segment (--in2)");
  const SignalSeries seg1 = load_series(cfg, require_in(cfg));
  const SignalSeries seg2 = load_series(cfg, cfg.in2);
  const auto t0 = std::chrono::steady_clock::now();
  const GapFill fill = interpolate_gap(seg1, seg2, cfg.gap, cfg.pseudosample(seg1.sigma()));
  RunManifest m = manifest_for(cfg);
  m.timings = {{"interpolate_s", seconds_since(t0)}};
  const ResidualReport res = gapped_residuals(seg1, seg2, cfg.gap, fill.report.estimates);
  const std::string path = out_or(cfg, "results.json");
  write_results(fill.report, res, m, path);
  const std::string values = values_or(cfg, "fill.txt");
  write_complex_list(fill.values, values);
  out << "interpolate: " << summary_numbers(fill.report, res) << " filled=" << fill.values.size()
      << " -> " << values << "\n";
  return 0;
}

int cmd_extrapolate(const RunConfig& cfg, std::ostream& out) {
  const SignalSeries series = load_series(cfg, require_in(cfg));
  const auto t0 = std::chrono::steady_clock::now();
  const Extrapolation ext = extrapolate(series, cfg.horizon, cfg.pseudosample(series.sigma()));
  RunManifest m = manifest_for(cfg);
  m.timings = {{"extrapolate_s", seconds_since(t0)}};
  const ResidualReport res = residual_report(series, ext.report.estimates);
  const std::string path = out_or(cfg, "results.json");
  write_results(ext.report, res, m, path);
  const std::string values = values_or(cfg, "forecast.txt");
  write_complex_list(ext.values, values);
  out << "extrapolate: " << summary_numbers(ext.report, res)
      << (ext.no_signal ? " no signal" : "") << " -> " << values << "\n";
  return 0;
}

int cmd_shape_forward(const RunConfig& cfg, std::ostream& out) {
  const Polygon poly(read_complex_list(require_in(cfg)));
  MomentSequence mom = moments_from_polygon(poly, cfg.count);
  const double sigma = cfg.sigma.value_or(0.0);
  if (sigma < 0.0) throw InvalidInput("sigma must be non-negative");
  if (sigma > 0.0) {
    std::mt19937_64 gen(stream_seed(cfg.seed, 0));
    std::normal_distribution<double> noise(0.0, sigma / std::sqrt(2.0));
    for (Complex& mu : mom.moments) mu += Complex{noise(gen), noise(gen)};
  }
  const std::string path = out_or(cfg, "moments.txt");
  write_complex_list(mom.moments, path);
  out << "shape-forward: " << mom.moments.size() << " moments";
  if (mom.moments.size() > 2) out << " mu_2=" << mom.moments[2].real() << (mom.moments[2].imag() < 0 ? "" : "+") << mom.moments[2].imag() << "i";
  out << " -> " << path << "\n";
  return 0;
}

int cmd_shape_recover(const RunConfig& cfg, std::ostream& out) {
  MomentSequence mom{read_complex_list(require_in(cfg)), cfg.sigma.value_or(0.0)};
  const SignalSeries s = moment_series(mom);
  const auto t0 = std::chrono::steady_clock::now();
  const VertexRecovery rec = vertices_from_moments(mom, cfg.pseudosample(mom.sigma), cfg.p_known);
  RunManifest m = manifest_for(cfg);
  m.timings = {{"recover_s", seconds_since(t0)}};
  const ResidualReport res = residual_report(s, rec.vertices);
  const std::string path = out_or(cfg, "results.json");
  write_results(rec.report, res, m, path);
  const std::string values = values_or(cfg, "vertices.txt");
  write_complex_list(order_vertices(rec.vertices.nodes()), values);
  out << "shape-recover: " << summary_numbers(rec.report, res) << " -> " << values << "\n";
  return 0;
}

int cmd_filter(const RunConfig& cfg, std::ostream& out) {
  const SignalSeries series = load_series(cfg, require_in(cfg));
  const SignalSeries filtered = passband_filter(series, cfg.f_lo, cfg.f_hi, cfg.decimate);
  const std::string path = out_or(cfg, "filtered.csv");
  write_series(filtered, path, format_from_path(path));
  out << "filter: " << filtered.size() << " samples, dt=" << filtered.dt()
      << " sigma=" << filtered.sigma() << " -> " << path << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const SignalSeries series = load_series(cfg, require_in(cfg));
  const PseudosampleConfig base = cfg.pseudosample(series.sigma());
  auto or_base = [](auto list, auto value) {
    if (list.empty()) list.push_back(value);
    return list;
  };
  std::vector<PseudosampleConfig> grid;
  for (std::size_t r : or_base(cfg.sweep_replications, base.replications))
    for (double sp : or_base(cfg.sweep_sigma_prime, base.sigma_prime))
      for (std::size_t pt : or_base(cfg.sweep_p_tilde, base.p_tilde))
        for (double k : or_base(cfg.sweep_selection_constant, base.selection_constant)) {
          PseudosampleConfig c = base;
          c.replications = r;
          c.sigma_prime = sp;
          c.p_tilde = pt;
          c.selection_constant = k;
          grid.push_back(c);
        }
  const SweepResult sweep = sweep_hyperparameters(series, grid);
  json table = json::array();
  for (const SweepRow& row : sweep.table) {
    json j = {{"replications", row.config.replications},
              {"sigma_prime", row.config.sigma_prime},
              {"p_tilde", row.config.p_tilde},
              {"selection_constant", row.config.selection_constant},
              {"ok", row.ok}};
    if (row.ok) {
      j["exceed_count"] = row.exceed_count;
      j["p_hat"] = row.p_hat;
      j["mse"] = row.mse;
    } else {
      j["error"] = row.error;
    }
    table.push_back(std::move(j));
  }
  json doc = {{"schema_version", kResultsSchemaVersion},
              {"best_index", sweep.best_index},
              {"table", table},
              {"manifest", json::parse(format_manifest(manifest_for(cfg)))}};
  const std::string path = out_or(cfg, "sweep.json");
  write_text(path, doc.dump(2) + "\n");
  out << "sweep: best " << sweep.best_index << " of " << grid.size() << " -> " << path << "\n";
  return 0;
}

struct Command {
  const char* name;
  const char* help;
  int (*run)(const RunConfig&, std::ostream&);
};

constexpr Command kCommands[] = {
    {"estimate", "estimate an exponential model from a series", cmd_estimate},
    {"density", "condensed density on a lattice", cmd_density},
    {"design", "identifiability over noise levels and lengths", cmd_design},
    {"interpolate", "fill a gap between two segments", cmd_interpolate},
    {"extrapolate", "forecast beyond the end of a series", cmd_extrapolate},
    {"shape-forward", "harmonic moments of a polygon", cmd_shape_forward},
    {"shape-recover", "polygon vertices from moments", cmd_shape_recover},
    {"filter", "pass-band filter and decimate a series", cmd_filter},
    {"sweep", "hyperparameter sweep", cmd_sweep},
};

template <class T>
void flag(CLI::App* app, const std::string& name, const std::string& key, json& flags,
          const std::string& help) {
  app->add_option_function<T>(name, [&flags, key](const T& v) { flags[key] = v; }, help);
}

void add_flags(CLI::App* app, json& flags) {
  flag<std::string>(app, "--config", "config", flags, "JSON config file");
  flag<std::string>(app, "--in", "in", flags, "input file");
  flag<std::string>(app, "--in2", "in2", flags, "second input file");
  flag<std::string>(app, "--out", "out", flags, "output file");
  flag<std::string>(app, "--grid-out", "grid_out", flags, "density grid file");
  flag<std::string>(app, "--values-out", "values_out", flags, "complex values file");
  flag<double>(app, "--sigma", "sigma", flags, "noise deviation of the data");
  flag<double>(app, "--dt", "dt", flags, "sampling interval");
  flag<std::size_t>(app, "--R", "replications", flags, "replications");
  flag<double>(app, "--sigma-prime", "sigma_prime", flags, "pseudo-noise deviation");
  flag<std::uint64_t>(app, "--seed", "seed", flags, "random seed");
  flag<std::size_t>(app, "--p-tilde", "p_tilde", flags, "order bound (0 = n/2)");
  flag<double>(app, "--K", "selection_constant", flags, "selection constant");
  flag<std::size_t>(app, "--mesh-size", "mesh_size", flags, "mesh points per side");
  flag<double>(app, "--mesh-delta", "mesh_delta", flags, "mesh spacing");
  flag<std::string>(app, "--path", "path", flags, "fast or slow");
  app->add_option_function<std::vector<double>>(
         "--grid", [&flags](const std::vector<double>& v) { flags["grid"] = v; },
         "x_min x_max y_min y_max nx ny")
      ->expected(6);
  flag<std::string>(app, "--signal", "signal", flags, "zero or file");
  flag<std::size_t>(app, "--n", "n", flags, "series length");
  flag<std::size_t>(app, "--count", "count", flags, "number of moments");
  flag<std::size_t>(app, "--p-known", "p_known", flags, "known number of vertices");
  flag<std::size_t>(app, "--gap", "gap", flags, "missing samples between segments");
  flag<std::size_t>(app, "--horizon", "horizon", flags, "samples to forecast");
  app->add_option_function<std::vector<double>>(
         "--band", [&flags](const std::vector<double>& v) {
           flags["f_lo"] = v[0];
           flags["f_hi"] = v[1];
         },
         "f_lo f_hi in normalized frequency")
      ->expected(2);
  flag<std::size_t>(app, "--decimate", "decimate", flags, "decimation factor");
  flag<double>(app, "--reference-hz", "reference_hz", flags, "spectrometer frequency");
  flag<double>(app, "--offset-hz", "offset_hz", flags, "frequency offset");
  flag<std::vector<std::size_t>>(app, "--R-list", "sweep_replications", flags, "sweep R");
  flag<std::vector<double>>(app, "--sigma-prime-list", "sweep_sigma_prime", flags,
                            "sweep sigma'");
  flag<std::vector<std::size_t>>(app, "--p-tilde-list", "sweep_p_tilde", flags, "sweep p~");
  flag<std::vector<double>>(app, "--K-list", "sweep_selection_constant", flags, "sweep K");
  flag<double>(app, "--radius", "radius", flags, "candidate radius");
  flag<std::vector<double>>(app, "--sigmas", "design_sigmas", flags, "design noise levels");
  flag<std::vector<std::size_t>>(app, "--ns", "design_ns", flags, "design lengths");
}

}  // namespace

PseudosampleConfig RunConfig::pseudosample(double data_sigma) const {
  PseudosampleConfig c;
  c.replications = replications;
  c.sigma_prime = sigma_prime.value_or(data_sigma);
  c.seed = seed;
  c.p_tilde = p_tilde;
  c.selection_constant = selection_constant;
  c.mesh_size = mesh_size;
  c.mesh_delta = mesh_delta;
  if (path == "fast")
    c.path = SolverPath::kFast;
  else if (path == "slow")
    c.path = SolverPath::kSlow;
  else
    throw InvalidInput("path must be 'fast' or 'slow'");
  c.validate();
  return c;
}

Lattice RunConfig::lattice() const {
  if (grid.size() != 6) throw InvalidInput("grid needs x_min x_max y_min y_max nx ny");
  for (std::size_t k = 4; k < 6; ++k)
    if (!(grid[k] >= 1.0) || grid[k] != std::floor(grid[k]))
      throw InvalidInput("grid sizes must be positive integers");
  Lattice L;
  L.x_min = grid[0];
  L.x_max = grid[1];
  L.y_min = grid[2];
  L.y_max = grid[3];
  L.nx = static_cast<std::size_t>(grid[4]);
  L.ny = static_cast<std::size_t>(grid[5]);
  L.validate();
  return L;
}

void apply_config_json(RunConfig& cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed config: ") + e.what());
  }
  apply_json(cfg, j);
}

std::string config_to_json(const RunConfig& cfg) { return config_json(cfg).dump(); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponential model estimation by pseudosample replication", "ceap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  json flags = json::object();
  std::map<const CLI::App*, const Command*> commands;
  for (const Command& c : kCommands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_flags(sub, flags);
    commands[sub] = &c;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const Command* command = nullptr;
  for (const auto& [sub, c] : commands)
    if (sub->parsed()) command = c;

  try {
    RunConfig cfg;
    if (flags.contains("config")) {
      const std::string path = flags["config"].get<std::string>();
      flags.erase("config");
      try {
        apply_json(cfg, json::parse(read_text(path)));
      } catch (const json::parse_error& e) {
        throw InvalidInput(path + ": malformed config: " + e.what());
      }
    }
    apply_json(cfg, flags);
    return command->run(cfg, out);
  } catch (const NumericalFailure& e) {
    err << command->name << ": numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << command->name << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ceap::cli
