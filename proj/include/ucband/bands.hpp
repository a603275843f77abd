#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ucband/estimator.hpp"

namespace ucband {

enum class BandVariant { bias_controlled, undersmoothed };

const char* to_string(BandVariant v) noexcept;
BandVariant band_variant_from_string(std::string_view s);

/// Band f_hat(x, l_hat) +- (c_hat(alpha) + c') sigma_hat(x, l_hat) / sqrt(n) on a grid.
/// The centre and half-width are stored; the endpoints are derived from them and
/// are never clipped. Clipping at zero is a reporting concern (`*_clipped`).
struct ConfidenceBand {
  EvalGrid grid;
  std::vector<double> center;
  std::vector<double> half_width;
  std::vector<double> sigma;
  double l_hat = 0.0;
  double c_hat_alpha = 0.0;
  double c_n_prime = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  BandVariant variant = BandVariant::bias_controlled;

  std::size_t size() const noexcept { return center.size(); }
  double lower(std::size_t i) const { return center[i] - half_width[i]; }
  double upper(std::size_t i) const { return center[i] + half_width[i]; }
  double width(std::size_t i) const { return 2.0 * half_width[i]; }
  double lower_clipped(std::size_t i) const;
  double upper_clipped(std::size_t i) const;
};

ConfidenceBand bias_controlled_band(const StudentizedSurface& surface, double l_hat,
                                    double c_hat_alpha, double c_n_prime, double alpha = 0.0);

ConfidenceBand undersmoothed_band(const StudentizedSurface& surface, double l_hat,
                                  double c_hat_alpha, double alpha = 0.0);

using DensityFunction = std::function<double(std::span<const double>)>;

/// True iff lower(x) <= f(x) <= upper(x) at every grid point (unclipped band).
bool contains_function(const ConfidenceBand& band, const DensityFunction& truth);

/// (log n / n)^{t / (2t + d)}.
double minimax_rate(std::size_t n, double t, std::size_t d);

struct WidthReport {
  double sup_width = 0.0;
  double mean_width = 0.0;
  std::optional<double> rate;        // r_n(t)
  std::optional<double> rate_ratio;  // sup_width / r_n(t)
};

WidthReport width_report(const ConfidenceBand& band, std::optional<double> t = std::nullopt);

}  // namespace ucband
