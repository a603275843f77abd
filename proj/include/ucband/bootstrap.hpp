#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ucband/estimator.hpp"

namespace ucband {

/// B realisations of the sup over the surface grid of |G_hat(x, l)|.
struct MultiplierDraws {
  std::vector<double> sup_stats;  // replicate order
  std::uint64_t master_seed = 0;
  bool streamed = false;

  std::size_t replications() const noexcept { return sup_stats.size(); }
};

struct QuantileEstimate {
  double value = 0.0;
  double alpha = 0.0;
  std::size_t replications = 0;
  std::size_t order_index = 0;  // 1-based rank of the order statistic used
};

inline constexpr std::size_t kMinReplications = 100;
inline constexpr std::size_t kReplicateChunk = 64;
inline constexpr double kDefaultMemoryBudgetMb = 512.0;

/// Rank ceil((1 - alpha) B), 1-based, clamped to [1, B].
std::size_t quantile_rank(double alpha, std::size_t replications);

/// n x |cells| matrix with entries (K_l(X_i, x) - f_hat(x, l)) / (sigma_hat(x, l) sqrt(n)).
/// Cells are ordered level-major: cell = level * |grid| + grid index.
Eigen::MatrixXd studentized_kernel_matrix(const Sample& sample, const KernelFamily& family,
                                          const StudentizedSurface& surface);

/// max over cells of |(1/sqrt n) sum_i xi_i (K_l(X_i, x) - f_hat) / sigma_hat| for one xi.
double multiplier_sup_draw(const Sample& sample, const KernelFamily& family,
                           const StudentizedSurface& surface, std::span<const double> xi);

/// Multiplier vector of replicate b (i.i.d. N(0,1), child stream of master_seed).
std::vector<double> multiplier_vector(std::size_t n, std::uint64_t master_seed, std::size_t b);

/// All B sup statistics. The kernel matrix is materialised when it fits in
/// `memory_budget_mb`; otherwise cells are processed in blocks.
MultiplierDraws multiplier_draws(const Sample& sample, const KernelFamily& family,
                                 const StudentizedSurface& surface, std::size_t replications,
                                 std::uint64_t master_seed,
                                 double memory_budget_mb = kDefaultMemoryBudgetMb);

/// Conditional (1 - alpha)-quantile from existing draws.
QuantileEstimate quantile_from_draws(const MultiplierDraws& draws, double alpha);

QuantileEstimate bootstrap_quantile(const Sample& sample, const KernelFamily& family,
                                    const StudentizedSurface& surface, double alpha,
                                    std::size_t replications, std::uint64_t master_seed,
                                    double memory_budget_mb = kDefaultMemoryBudgetMb);

}  // namespace ucband
