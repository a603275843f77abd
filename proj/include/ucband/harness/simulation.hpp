#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <json.hpp>
#include <string>
#include <vector>

#include "ucband/harness/config.hpp"
#include "ucband/harness/densities.hpp"

namespace ucband::harness {

inline constexpr std::size_t kMinCoverageReps = 100;

struct CoverageSpec {
  std::string density_id;
  std::size_t n = 2000;
  std::vector<double> alphas{0.1};
  std::size_t reps = 500;
  std::uint64_t master_seed = kDefaultSeed;
  /// Kernel, grids and tuning. Empty grid bounds mean the density's band region.
  RunConfig config;
};

struct CoverageRow {
  double alpha = 0.0;
  std::size_t covered = 0;
  double empirical_coverage = 0.0;
  double binomial_se = 0.0;
  double mean_sup_width = 0.0;  // over successful reps
};

struct CoverageReport {
  std::string density_id;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t errors = 0;  // failed reps, counted as not covered
  std::vector<CoverageRow> rows;
  std::map<double, std::size_t> l_hat_histogram;
  std::size_t no_level_accepted = 0;
  std::string config_echo;
};

/// Per rep r the sample comes from child_rng(seed, sample, r) and the
/// multiplier draws from derive_seed(seed, multiplier, r); all alphas share
/// one draw set so coverage is monotone in alpha.
CoverageReport coverage_sim(const CoverageSpec& spec);

struct AdaptivitySpec {
  std::vector<std::string> density_ids;
  std::vector<std::size_t> ladder{1000, 4000, 16000};
  std::size_t reps = 100;
  std::uint64_t master_seed = kDefaultSeed;
  RunConfig config;
  /// Shared band region; empty means the first density's band region.
  std::vector<double> x_lower, x_upper;
};

struct AdaptivityCurve {
  std::string density_id;
  double holder_t = 0.0;
  double theoretical_slope = 0.0;  // t / (2t + d)
  double fitted_slope = 0.0;       // OLS of log mean sup-width on log(log n / n)
  std::vector<double> mean_sup_width;        // per ladder point
  std::vector<double> mean_l_hat;            // per ladder point
  std::vector<std::vector<double>> widths;   // [ladder][rep], NaN for failed reps
  std::vector<std::size_t> errors;           // per ladder point
  /// Fraction of reps with width(n_{k+1}) < width(n_k), per consecutive pair.
  std::vector<double> paired_decrease_fraction;
};

struct AdaptivityReport {
  std::vector<std::size_t> ladder;
  std::size_t reps = 0;
  std::vector<AdaptivityCurve> curves;
  std::string config_echo;
};

AdaptivityReport adaptivity_sim(const AdaptivitySpec& spec);

/// Ordinary least squares slope of y on x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::ordered_json to_json(const CoverageReport& report);
nlohmann::ordered_json to_json(const AdaptivityReport& report);

}  // namespace ucband::harness
