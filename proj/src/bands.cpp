#include "ucband/bands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ucband/error.hpp"

namespace ucband {

const char* to_string(BandVariant v) noexcept {
  return v == BandVariant::bias_controlled ? "bias-controlled" : "undersmoothed";
}

BandVariant band_variant_from_string(std::string_view s) {
  if (s == "bias-controlled") return BandVariant::bias_controlled;
  if (s == "undersmoothed") return BandVariant::undersmoothed;
  throw ParameterError("unknown band variant '" + std::string(s) + "'");
}

double ConfidenceBand::lower_clipped(std::size_t i) const { return std::max(0.0, lower(i)); }
double ConfidenceBand::upper_clipped(std::size_t i) const { return std::max(0.0, upper(i)); }

namespace {

ConfidenceBand assemble(const StudentizedSurface& surface, double l_hat, double c_hat_alpha,
                        double c_n_prime, double alpha, BandVariant variant) {
  if (!(c_hat_alpha >= 0.0)) throw ParameterError("c_hat_alpha must be >= 0");
  if (!(c_n_prime >= 0.0)) throw ParameterError("c_n_prime must be >= 0");
  const auto k = surface.require_level(l_hat);

  ConfidenceBand band;
  band.grid = surface.grid;
  band.l_hat = l_hat;
  band.c_hat_alpha = c_hat_alpha;
  band.c_n_prime = c_n_prime;
  band.alpha = alpha;
  band.n = surface.n;
  band.variant = variant;

  const double factor = (c_hat_alpha + c_n_prime) / std::sqrt(static_cast<double>(surface.n));
  const std::size_t g = surface.grid_size();
  band.center.resize(g);
  band.half_width.resize(g);
  band.sigma.resize(g);
  for (std::size_t i = 0; i < g; ++i) {
    band.center[i] = surface.f_hat(i, k);
    band.sigma[i] = surface.sigma_hat(i, k);
    band.half_width[i] = factor * band.sigma[i];
  }
  return band;
}

}  // namespace

ConfidenceBand bias_controlled_band(const StudentizedSurface& surface, double l_hat,
                                    double c_hat_alpha, double c_n_prime, double alpha) {
  return assemble(surface, l_hat, c_hat_alpha, c_n_prime, alpha, BandVariant::bias_controlled);
}

ConfidenceBand undersmoothed_band(const StudentizedSurface& surface, double l_hat,
                                  double c_hat_alpha, double alpha) {
  return assemble(surface, l_hat, c_hat_alpha, 0.0, alpha, BandVariant::undersmoothed);
}

bool contains_function(const ConfidenceBand& band, const DensityFunction& truth) {
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double f = truth(band.grid.point(i));
    if (!(band.lower(i) <= f && f <= band.upper(i))) return false;
  }
  return true;
}

double minimax_rate(std::size_t n, double t, std::size_t d) {
  if (!(t > 0.0)) throw ParameterError("smoothness t must be > 0");
  if (n < 2) throw ParameterError("rate needs n >= 2");
  const double nn = static_cast<double>(n);
  return std::pow(std::log(nn) / nn, t / (2.0 * t + static_cast<double>(d)));
}

WidthReport width_report(const ConfidenceBand& band, std::optional<double> t) {
  if (band.size() == 0) throw ParameterError("empty band");
  if (t && !(*t > 0.0)) throw ParameterError("smoothness t must be > 0");
  WidthReport r;
  double sum = 0.0;
  for (std::size_t i = 0; i < band.size(); ++i) {
    r.sup_width = std::max(r.sup_width, band.width(i));
    sum += band.width(i);
  }
  r.mean_width = sum / static_cast<double>(band.size());
  if (t) {
    r.rate = minimax_rate(band.n, *t, band.grid.d());
    r.rate_ratio = r.sup_width / *r.rate;
  }
  return r;
}

}  // namespace ucband
