#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ucband/bands.hpp"
#include "ucband/bootstrap.hpp"
#include "ucband/estimator.hpp"
#include "ucband/kernels.hpp"
#include "ucband/lepski.hpp"

namespace ucband::harness {

inline constexpr std::uint64_t kDefaultSeed = 20140101;
inline constexpr const char* kSeedEnvVar = "UCBAND_SEED";

struct GridConfig {
  std::vector<double> x_lower, x_upper;  // band region X (required)
  std::size_t x_points = 0;              // 0 means 128 * d
  double l_min = 2.0;
  double l_max = 6.0;
  std::optional<double> l_spacing;       // unset: 1 for wavelets, 0.25 otherwise
};

struct BootstrapConfig {
  std::size_t replications = 1000;
  std::uint64_t seed = kDefaultSeed;
  double memory_budget_mb = kDefaultMemoryBudgetMb;
};

/// Everything a run needs. Serialises to a flat INI-style file whose keys
/// are the dotted names accepted by `set`.
struct RunConfig {
  std::string kernel = "epanechnikov";
  std::size_t dimension = 1;
  double alpha = 0.05;
  BandVariant variant = BandVariant::bias_controlled;
  DegeneracyPolicy degeneracy = DegeneracyPolicy::error;
  std::vector<double> series_lower, series_upper;
  int dyadic_resolution = 12;
  GridConfig grid;
  LepskiConfig lepski;
  BootstrapConfig bootstrap;
  std::string data_path, output_path, metadata_path;

  /// Sets one key, e.g. "lepski.q" or "grid.x_lower" (comma-separated list).
  void set(const std::string& key, const std::string& value);

  void validate() const;
  std::size_t x_point_count() const noexcept;
  double level_spacing() const;

  KernelFamily make_family() const;
  EvalGrid make_xgrid() const;
  ResolutionGrid make_lgrid() const;
};

/// Default config with the seed taken from UCBAND_SEED when set.
RunConfig default_config();

RunConfig parse_config(std::istream& in, RunConfig base = default_config());
RunConfig load_config(const std::string& path, RunConfig base = default_config());
void save_config(const RunConfig& config, std::ostream& out);
std::string to_string(const RunConfig& config);

std::string format_double(double v);
std::string format_list(const std::vector<double>& v);
std::vector<double> parse_list(const std::string& s);

}  // namespace ucband::harness
