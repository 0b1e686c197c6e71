#include "ceap/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ceap/error.hpp"

namespace ceap {

namespace {

using nlohmann::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string& what) {
  throw InvalidInput("line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": " + what);
}

// Splits into lines, tracking 1-based line numbers.
template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line = 1;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view row = text.substr(0, end);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    f(line, row);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
    ++line;
  }
}

SignalSeries parse_csv(std::string_view text) {
  std::vector<Complex> samples;
  bool first_row = true;
  for_each_line(text, [&](std::size_t line, std::string_view row) {
    if (trim(row).empty()) return;
    std::vector<std::pair<std::size_t, std::string_view>> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      fields.emplace_back(start + 1, row.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    double v[2];
    bool numeric = fields.size() == 2;
    for (std::size_t k = 0; k < fields.size() && k < 2; ++k)
      numeric = parse_double(fields[k].second, v[k]) && numeric;
    if (!numeric && first_row) {
      first_row = false;
      double dummy;
      bool any_numeric = false;
      for (const auto& f : fields) any_numeric = any_numeric || parse_double(f.second, dummy);
      if (!any_numeric) return;  // header
    }
    first_row = false;
    if (fields.size() != 2)
      fail_at(line, 1, "expected 2 fields, found " + std::to_string(fields.size()));
    for (std::size_t k = 0; k < 2; ++k)
      if (!parse_double(fields[k].second, v[k]))
        fail_at(line, fields[k].first,
                "non-numeric field '" + std::string(trim(fields[k].second)) + "'");
    if (!std::isfinite(v[0]) || !std::isfinite(v[1])) fail_at(line, 1, "non-finite sample");
    samples.emplace_back(v[0], v[1]);
  });
  if (samples.empty()) throw InvalidInput("no samples");
  return SignalSeries(std::move(samples));
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    fail_at(line, column, "malformed JSON");
  }
}

double number_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw InvalidInput(std::string("field '") + key + "' must be a number");
  return j[key].get<double>();
}

SignalSeries parse_json_series(std::string_view text) {
  if (trim(text).empty()) throw InvalidInput("no samples");
  const json j = parse_json(text);
  if (!j.is_object()) throw InvalidInput("series document must be an object");
  for (const auto& [key, value] : j.items())
    if (key != "sigma" && key != "dt" && key != "samples")
      throw InvalidInput("unknown key '" + key + "'");
  const double sigma = number_field(j, "sigma", 0.0);
  const double dt = number_field(j, "dt", 1.0);
  if (!j.contains("samples") || !j["samples"].is_array() || j["samples"].empty())
    throw InvalidInput("no samples");
  std::vector<Complex> samples;
  std::size_t row = 0;
  for (const json& s : j["samples"]) {
    ++row;
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number())
      throw InvalidInput("sample " + std::to_string(row) + ": expected [re, im] numbers");
    samples.emplace_back(s[0].get<double>(), s[1].get<double>());
  }
  return SignalSeries(std::move(samples), sigma, dt);
}

Complex complex_from(const json& j, const char* re, const char* im) {
  return {j.at(re).get<double>(), j.at(im).get<double>()};
}

json manifest_object(const RunManifest& manifest) {
  json timings = json::object();
  for (const auto& [stage, seconds] : manifest.timings) timings[stage] = seconds;
  return {{"config", json::parse(manifest.config_json)},
          {"seed", manifest.seed},
          {"version", manifest.version},
          {"timings", std::move(timings)},
          {"failures", manifest.failures},
          {"switched_to_slow", manifest.switched_to_slow}};
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error("cannot write " + path.string());
}

SeriesFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext == ".json" ? SeriesFormat::kJson : SeriesFormat::kCsv;
}

SignalSeries parse_series(std::string_view text, SeriesFormat format) {
  return format == SeriesFormat::kJson ? parse_json_series(text) : parse_csv(text);
}

SignalSeries read_series(const std::filesystem::path& path, SeriesFormat format) {
  return parse_series(read_text(path), format);
}

SignalSeries read_series(const std::filesystem::path& path) {
  return read_series(path, format_from_path(path));
}

std::string format_series(const SignalSeries& series, SeriesFormat format) {
  std::string out;
  if (format == SeriesFormat::kCsv) {
    out = "re,im\n";
    for (const Complex& s : series.samples()) out += g17(s.real()) + "," + g17(s.imag()) + "\n";
    return out;
  }
  out = "{\"sigma\": " + g17(series.sigma()) + ", \"dt\": " + g17(series.dt()) +
        ", \"samples\": [";
  bool first = true;
  for (const Complex& s : series.samples()) {
    out += first ? "\n  [" : ",\n  [";
    out += g17(s.real()) + ", " + g17(s.imag()) + "]";
    first = false;
  }
  out += "\n]}\n";
  return out;
}

void write_series(const SignalSeries& series, const std::filesystem::path& path,
                  SeriesFormat format) {
  write_text(path, format_series(series, format));
}

std::vector<Complex> parse_complex_list(std::string_view text) {
  std::vector<Complex> out;
  for_each_line(text, [&](std::size_t line, std::string_view row) {
    const std::string_view t = trim(row);
    if (t.empty() || t.front() == '#') return;
    std::istringstream ss{std::string(t)};
    std::string a, b, extra;
    ss >> a >> b;
    double re, im;
    if (!parse_double(a, re)) fail_at(line, row.find(a) + 1, "non-numeric field '" + a + "'");
    if (b.empty()) fail_at(line, row.size() + 1, "expected 2 fields");
    if (!parse_double(b, im))
      fail_at(line, row.find(b, row.find(a) + a.size()) + 1, "non-numeric field '" + b + "'");
    if (ss >> extra) fail_at(line, row.find(extra) + 1, "unexpected field '" + extra + "'");
    out.emplace_back(re, im);
  });
  return out;
}

std::vector<Complex> read_complex_list(const std::filesystem::path& path) {
  return parse_complex_list(read_text(path));
}

void write_complex_list(std::span<const Complex> values, const std::filesystem::path& path) {
  std::string out;
  for (const Complex& v : values) out += g17(v.real()) + " " + g17(v.imag()) + "\n";
  write_text(path, out);
}

void write_density_grid(const DensityMap& map, const std::filesystem::path& path) {
  const Lattice& L = map.lattice;
  std::string out = std::to_string(L.nx) + " " + std::to_string(L.ny) + " " + g17(L.x_min) +
                    " " + g17(L.x_max) + " " + g17(L.y_min) + " " + g17(L.y_max) + "\n";
  for (std::size_t j = 0; j < L.ny; ++j) {
    for (std::size_t i = 0; i < L.nx; ++i) {
      if (i) out += ' ';
      out += g17(map.at(i, j));
    }
    out += '\n';
  }
  write_text(path, out);
}

DensityMap read_density_grid(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  DensityMap map;
  Lattice& L = map.lattice;
  if (!(in >> L.nx >> L.ny >> L.x_min >> L.x_max >> L.y_min >> L.y_max))
    throw InvalidInput("line 1: malformed grid header");
  L.validate();
  map.values.resize(L.nx * L.ny);
  for (double& v : map.values)
    if (!(in >> v)) throw InvalidInput("grid file holds fewer values than nx * ny");
  for (double v : map.values) map.total_mass += v * L.dx() * L.dy();
  return map;
}

std::string format_results(const ClusterReport& report, const ResidualReport& residuals,
                           const RunManifest& manifest) {
  json terms = json::array();
  for (const Cluster& c : report.clusters) {
    if (!c.selected) continue;
    terms.push_back({{"c_re", c.estimate.weight.real()},
                     {"c_im", c.estimate.weight.imag()},
                     {"xi_re", c.estimate.node.real()},
                     {"xi_im", c.estimate.node.imag()},
                     {"cluster_mass_re", c.laplacian_mass.real()},
                     {"cluster_mass_im", c.laplacian_mass.imag()},
                     {"member_count", c.members.size()}});
  }
  json doc;
  doc["schema_version"] = kResultsSchemaVersion;
  doc["p_hat"] = report.p_hat;
  doc["terms"] = std::move(terms);
  doc["exceed_count"] = residuals.exceed_count;
  doc["mse"] = residuals.mse;
  doc["manifest"] = manifest_object(manifest);
  return doc.dump(2) + "\n";
}

std::string format_manifest(const RunManifest& manifest) {
  return manifest_object(manifest).dump();
}

void write_results(const ClusterReport& report, const ResidualReport& residuals,
                   const RunManifest& manifest, const std::filesystem::path& path) {
  write_text(path, format_results(report, residuals, manifest));
}

ResultsDocument parse_results(std::string_view text) {
  const json j = parse_json(text);
  ResultsDocument doc;
  try {
    doc.schema_version = j.at("schema_version").get<int>();
    doc.p_hat = j.at("p_hat").get<std::size_t>();
    for (const json& t : j.at("terms")) {
      ResultTerm term;
      term.weight = complex_from(t, "c_re", "c_im");
      term.node = complex_from(t, "xi_re", "xi_im");
      term.cluster_mass = complex_from(t, "cluster_mass_re", "cluster_mass_im");
      term.member_count = t.at("member_count").get<std::size_t>();
      doc.terms.push_back(term);
    }
    doc.exceed_count = j.at("exceed_count").get<std::size_t>();
    doc.mse = j.at("mse").get<double>();
    doc.manifest_json = j.at("manifest").dump();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed results document: ") + e.what());
  }
  return doc;
}

ResultsDocument read_results(const std::filesystem::path& path) {
  return parse_results(read_text(path));
}

}  // namespace ceap
