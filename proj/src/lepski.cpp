#include "ucband/lepski.hpp"

#include <algorithm>
#include <cmath>

#include "ucband/error.hpp"

namespace ucband {

double LepskiConfig::gamma_for(std::size_t n) const {
  if (gamma) return *gamma;
  return std::min(0.1, 1.0 / std::sqrt(static_cast<double>(n)));
}

void LepskiConfig::validate() const {
  if (!(q > 1.0)) throw ParameterError("lepski.q must be > 1");
  if (gamma && !(*gamma > 0.0 && *gamma < 1.0))
    throw ParameterError("lepski.gamma must lie in (0, 1)");
  if (!(u_prime > 0.0)) throw ParameterError("lepski.u_prime must be > 0");
}

namespace {

double column_pair_stat(const StudentizedSurface& s, std::size_t a, std::size_t b) {
  const double root_n = std::sqrt(static_cast<double>(s.n));
  double best = 0.0;
  for (std::size_t g = 0; g < s.grid_size(); ++g) {
    const double num = root_n * std::abs(s.f_hat(g, a) - s.f_hat(g, b));
    best = std::max(best, num / (s.sigma_hat(g, a) + s.sigma_hat(g, b)));
  }
  return best;
}

}  // namespace

double pairwise_stat(const StudentizedSurface& surface, double l, double l_prime) {
  if (!(l < l_prime)) throw ParameterError("pairwise_stat needs l < l'");
  const auto a = surface.require_level(l);
  const auto b = surface.require_level(l_prime);
  return column_pair_stat(surface, static_cast<std::size_t>(a), static_cast<std::size_t>(b));
}

std::vector<double> lepski_statistics(const StudentizedSurface& surface) {
  const std::size_t levels = surface.level_count();
  std::vector<double> stats(levels, 0.0);
  for (std::size_t a = 0; a < levels; ++a)
    for (std::size_t b = a + 1; b < levels; ++b)
      stats[a] = std::max(stats[a], column_pair_stat(surface, a, b));
  return stats;
}

SelectionResult select_with_quantile(const StudentizedSurface& surface,
                                     const QuantileEstimate& c_gamma, const LepskiConfig& config) {
  config.validate();
  if (surface.level_count() == 0) throw UnusableSurfaceError("surface has no levels");

  SelectionResult r;
  r.levels = surface.levels;
  r.gamma = c_gamma.alpha;
  r.c_hat_gamma = c_gamma.value;
  r.threshold = config.q * c_gamma.value;
  r.c_n_prime = config.u_prime * c_gamma.value;
  r.test_statistics = lepski_statistics(surface);

  r.no_level_accepted = true;
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    if (r.test_statistics[k] <= r.threshold) {
      r.l_hat_index = k;
      r.no_level_accepted = false;
      break;
    }
  }
  if (r.no_level_accepted) r.l_hat_index = r.levels.size() - 1;
  r.l_hat = r.levels[r.l_hat_index];
  return r;
}

SelectionResult select_resolution(const StudentizedSurface& surface, const MultiplierDraws& draws,
                                  const LepskiConfig& config) {
  config.validate();
  return select_with_quantile(surface, quantile_from_draws(draws, config.gamma_for(surface.n)),
                              config);
}

SelectionResult select_resolution(const StudentizedSurface& surface, const Sample& sample,
                                  const KernelFamily& family, const LepskiConfig& config,
                                  std::size_t replications, std::uint64_t master_seed,
                                  double memory_budget_mb) {
  config.validate();
  if (surface.level_count() == 0) throw UnusableSurfaceError("surface has no levels");
  const MultiplierDraws draws =
      multiplier_draws(sample, family, surface, replications, master_seed, memory_budget_mb);
  return select_resolution(surface, draws, config);
}

}  // namespace ucband
