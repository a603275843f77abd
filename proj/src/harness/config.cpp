#include "ucband/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "ucband/error.hpp"

namespace ucband::harness {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParameterError(key + ": expected a finite number, got '" + raw + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParameterError(key + ": expected a nonnegative integer, got '" + raw + "'");
  return v;
}

bool is_auto(const std::string& raw) { return trim(raw) == "auto"; }

std::vector<double> broadcast(const std::vector<double>& v, std::size_t d) {
  if (v.size() == 1 && d > 1) return std::vector<double>(d, v[0]);
  return v;
}

}  // namespace

std::string format_double(double v) { return fmt::format("{}", v); }

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_double("list", item));
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "kernel") kernel = v;
  else if (key == "dimension") dimension = parse_uint(key, v);
  else if (key == "alpha") alpha = parse_double(key, v);
  else if (key == "variant") variant = band_variant_from_string(v);
  else if (key == "degeneracy") {
    if (v == "error") degeneracy = DegeneracyPolicy::error;
    else if (v == "drop-level") degeneracy = DegeneracyPolicy::drop_level;
    else throw ParameterError("degeneracy must be 'error' or 'drop-level'");
  }
  else if (key == "grid.x_lower") grid.x_lower = parse_list(v);
  else if (key == "grid.x_upper") grid.x_upper = parse_list(v);
  else if (key == "grid.x_points") grid.x_points = is_auto(v) ? 0 : parse_uint(key, v);
  else if (key == "grid.l_min") grid.l_min = parse_double(key, v);
  else if (key == "grid.l_max") grid.l_max = parse_double(key, v);
  else if (key == "grid.l_spacing") {
    if (is_auto(v)) grid.l_spacing.reset();
    else grid.l_spacing = parse_double(key, v);
  }
  else if (key == "series.lower") series_lower = parse_list(v);
  else if (key == "series.upper") series_upper = parse_list(v);
  else if (key == "wavelet.dyadic_resolution")
    dyadic_resolution = static_cast<int>(parse_uint(key, v));
  else if (key == "lepski.q") lepski.q = parse_double(key, v);
  else if (key == "lepski.gamma") {
    if (is_auto(v)) lepski.gamma.reset();
    else lepski.gamma = parse_double(key, v);
  }
  else if (key == "lepski.u_prime") lepski.u_prime = parse_double(key, v);
  else if (key == "bootstrap.replications") bootstrap.replications = parse_uint(key, v);
  else if (key == "bootstrap.seed") bootstrap.seed = parse_uint(key, v);
  else if (key == "bootstrap.memory_budget_mb")
    bootstrap.memory_budget_mb = parse_double(key, v);
  else if (key == "io.data") data_path = v;
  else if (key == "io.output") output_path = v;
  else if (key == "io.metadata") metadata_path = v;
  else throw ParameterError("unknown config key '" + key + "'");
}

std::size_t RunConfig::x_point_count() const noexcept {
  return grid.x_points ? grid.x_points : 128 * dimension;
}

double RunConfig::level_spacing() const {
  if (grid.l_spacing) return *grid.l_spacing;
  return (kernel == "haar" || kernel == "daub4") ? 1.0 : 0.25;
}

void RunConfig::validate() const {
  if (dimension < 1) throw ParameterError("dimension must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (grid.x_lower.empty() || grid.x_upper.empty())
    throw ParameterError("grid.x_lower and grid.x_upper are required");
  const auto lo = broadcast(grid.x_lower, dimension);
  const auto hi = broadcast(grid.x_upper, dimension);
  if (lo.size() != dimension || hi.size() != dimension)
    throw ParameterError("grid bounds must have one value or one per dimension");
  for (std::size_t j = 0; j < dimension; ++j)
    if (!(lo[j] < hi[j])) throw ParameterError("grid.x_lower must be below grid.x_upper");
  if (!(grid.l_min <= grid.l_max)) throw ParameterError("grid.l_min must not exceed grid.l_max");
  const double s = level_spacing();
  if (!(s > 0.0 && s <= 1.0)) throw ParameterError("grid.l_spacing must lie in (0, 1]");
  if (dyadic_resolution < 10 || dyadic_resolution > 20)
    throw ParameterError("wavelet.dyadic_resolution must lie in [10, 20]");
  lepski.validate();
  if (bootstrap.replications < kMinReplications)
    throw ParameterError("bootstrap.replications must be >= " + std::to_string(kMinReplications));
  if (!(bootstrap.memory_budget_mb > 0.0))
    throw ParameterError("bootstrap.memory_budget_mb must be positive");
}

KernelFamily RunConfig::make_family() const {
  return KernelFamily::from_name(kernel, static_cast<int>(dimension), series_lower, series_upper,
                                 dyadic_resolution);
}

EvalGrid RunConfig::make_xgrid() const {
  return EvalGrid::uniform(broadcast(grid.x_lower, dimension), broadcast(grid.x_upper, dimension),
                           x_point_count());
}

ResolutionGrid RunConfig::make_lgrid() const {
  return ResolutionGrid::range(grid.l_min, grid.l_max, level_spacing());
}

RunConfig default_config() {
  RunConfig c;
  if (const char* env = std::getenv(kSeedEnvVar); env && *env)
    c.bootstrap.seed = parse_uint(kSeedEnvVar, env);
  return c;
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParameterError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      base.set(name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) base.set(name + "." + key, leaf.data());
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

void save_config(const RunConfig& c, std::ostream& out) {
  pt::ptree tree;
  tree.put("kernel", c.kernel);
  tree.put("dimension", std::to_string(c.dimension));
  tree.put("alpha", format_double(c.alpha));
  tree.put("variant", std::string(to_string(c.variant)));
  tree.put("degeneracy",
           std::string(c.degeneracy == DegeneracyPolicy::error ? "error" : "drop-level"));

  pt::ptree grid;
  grid.put("x_lower", format_list(c.grid.x_lower));
  grid.put("x_upper", format_list(c.grid.x_upper));
  grid.put("x_points", c.grid.x_points ? std::to_string(c.grid.x_points) : "auto");
  grid.put("l_min", format_double(c.grid.l_min));
  grid.put("l_max", format_double(c.grid.l_max));
  grid.put("l_spacing", c.grid.l_spacing ? format_double(*c.grid.l_spacing) : "auto");
  tree.add_child("grid", grid);

  pt::ptree series;
  series.put("lower", format_list(c.series_lower));
  series.put("upper", format_list(c.series_upper));
  tree.add_child("series", series);

  pt::ptree wavelet;
  wavelet.put("dyadic_resolution", std::to_string(c.dyadic_resolution));
  tree.add_child("wavelet", wavelet);

  pt::ptree lepski;
  lepski.put("q", format_double(c.lepski.q));
  lepski.put("gamma", c.lepski.gamma ? format_double(*c.lepski.gamma) : "auto");
  lepski.put("u_prime", format_double(c.lepski.u_prime));
  tree.add_child("lepski", lepski);

  pt::ptree boot;
  boot.put("replications", std::to_string(c.bootstrap.replications));
  boot.put("seed", std::to_string(c.bootstrap.seed));
  boot.put("memory_budget_mb", format_double(c.bootstrap.memory_budget_mb));
  tree.add_child("bootstrap", boot);

  pt::ptree io;
  io.put("data", c.data_path);
  io.put("output", c.output_path);
  io.put("metadata", c.metadata_path);
  tree.add_child("io", io);

  pt::write_ini(out, tree);
}

std::string to_string(const RunConfig& config) {
  std::ostringstream out;
  save_config(config, out);
  return out.str();
}

}  // namespace ucband::harness
