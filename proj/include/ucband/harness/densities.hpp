#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucband/rng.hpp"

namespace ucband::harness {

/// A known density on a box with an exact pdf and an exact sampler.
struct TestDensity {
  std::string id;
  std::size_t dimension = 1;
  /// Nominal Hölder smoothness (infinity for the uniform, 0 for a jump).
  double holder_t = 0.0;
  std::vector<double> support_lower, support_upper;
  /// Default band region: interior box on which the density is bounded away from 0.
  std::vector<double> band_lower, band_upper;

  std::function<double(std::span<const double>)> pdf;
  /// Closed-form CDF, one-dimensional densities only.
  std::function<double(double)> cdf;
  /// Writes one draw into `out` (size = dimension).
  std::function<void(Rng&, std::span<double>)> draw;

  std::vector<double> sample(std::size_t n, Rng& rng) const;
};

/// Built-in ids: "uniform01", "cosine-bump", "sawtooth" / "sawtooth-<m>",
/// "bimodal-gauss-trunc", "step-third".
TestDensity make_density(std::string_view id, std::size_t dimension = 1);

std::vector<std::string> builtin_density_ids();

}  // namespace ucband::harness
