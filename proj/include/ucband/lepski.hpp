#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ucband/bootstrap.hpp"
#include "ucband/estimator.hpp"

namespace ucband {

struct LepskiConfig {
  double q = 1.1;
  /// Tail level gamma_n; unset means min(0.1, 1/sqrt(n)).
  std::optional<double> gamma;
  double u_prime = 2.0;

  double gamma_for(std::size_t n) const;
  void validate() const;
};

struct SelectionResult {
  double l_hat = 0.0;
  std::size_t l_hat_index = 0;
  double gamma = 0.0;
  double c_hat_gamma = 0.0;
  double threshold = 0.0;  // q * c_hat(gamma)
  double c_n_prime = 0.0;  // u' * c_hat(gamma)
  bool no_level_accepted = false;
  std::vector<double> levels;
  /// sup_{l' > l} pairwise_stat(l, l'), aligned with `levels` (0 for the last).
  std::vector<double> test_statistics;
};

/// max_x sqrt(n) |f(x,l) - f(x,l')| / (sigma(x,l) + sigma(x,l')), l < l'.
double pairwise_stat(const StudentizedSurface& surface, double l, double l_prime);

/// sup_{l' > l} pairwise_stat for every level of the surface.
std::vector<double> lepski_statistics(const StudentizedSurface& surface);

/// Smallest level whose statistic is <= q * c_gamma.value.
SelectionResult select_with_quantile(const StudentizedSurface& surface,
                                     const QuantileEstimate& c_gamma, const LepskiConfig& config);

/// Selection with the threshold quantile taken from existing draws.
SelectionResult select_resolution(const StudentizedSurface& surface, const MultiplierDraws& draws,
                                  const LepskiConfig& config);

SelectionResult select_resolution(const StudentizedSurface& surface, const Sample& sample,
                                  const KernelFamily& family, const LepskiConfig& config,
                                  std::size_t replications, std::uint64_t master_seed,
                                  double memory_budget_mb = kDefaultMemoryBudgetMb);

}  // namespace ucband
