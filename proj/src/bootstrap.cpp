#include "ucband/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "ucband/error.hpp"
#include "ucband/parallel.hpp"
#include "ucband/rng.hpp"

namespace ucband {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
}

// Fills columns [first, first + count) of `out` (n x count) with studentized
// kernel values of cells first..first+count-1.
void fill_cells(const Sample& sample, const KernelFamily& family,
                const StudentizedSurface& surface, std::size_t first, std::size_t count,
                Eigen::MatrixXd& out) {
  const std::size_t n = sample.n();
  const std::size_t gsize = surface.grid_size();
  const double root_n = std::sqrt(static_cast<double>(n));
  out.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(count));
  parallel_for(count, [&](std::size_t c) {
    const std::size_t cell = first + c;
    const std::size_t k = cell / gsize, g = cell % gsize;
    double* col = out.col(static_cast<Eigen::Index>(c)).data();
    kernel_column(sample, family, surface.levels[k], surface.grid.point(g), {col, n});
    const double centre = surface.f_hat(g, k);
    const double scale = 1.0 / (surface.sigma_hat(g, k) * root_n);
    for (std::size_t i = 0; i < n; ++i) col[i] = (col[i] - centre) * scale;
  });
}

void check_surface(const Sample& sample, const StudentizedSurface& surface) {
  if (surface.level_count() == 0 || surface.grid_size() == 0)
    throw UnusableSurfaceError("surface has no cells");
  if (surface.n != sample.n()) throw ParameterError("surface was built from a different sample");
  if ((surface.sigma_hat.array() <= 0.0).any())
    throw UnusableSurfaceError("surface contains nonpositive sigma_hat");
}

// Multipliers for replicates [b0, b0 + count) as an n x count matrix.
Eigen::MatrixXd multiplier_block(std::size_t n, std::uint64_t seed, std::size_t b0,
                                 std::size_t count) {
  Eigen::MatrixXd xi(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(count));
  for (std::size_t c = 0; c < count; ++c) {
    Rng rng = child_rng(seed, Stream::multiplier, b0 + c);
    fill_standard_normal(rng, {xi.col(static_cast<Eigen::Index>(c)).data(), n});
  }
  return xi;
}

}  // namespace

std::size_t quantile_rank(double alpha, std::size_t replications) {
  check_alpha(alpha);
  if (replications == 0) throw ParameterError("quantile of an empty draw set");
  const double target = (1.0 - alpha) * static_cast<double>(replications);
  // Guard against (1 - alpha) B landing a hair above an integer.
  auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9));
  return std::clamp<std::size_t>(rank, 1, replications);
}

Eigen::MatrixXd studentized_kernel_matrix(const Sample& sample, const KernelFamily& family,
                                          const StudentizedSurface& surface) {
  check_surface(sample, surface);
  Eigen::MatrixXd a;
  fill_cells(sample, family, surface, 0, surface.grid_size() * surface.level_count(), a);
  return a;
}

double multiplier_sup_draw(const Sample& sample, const KernelFamily& family,
                           const StudentizedSurface& surface, std::span<const double> xi) {
  if (xi.size() != sample.n()) throw ParameterError("multiplier vector length must equal n");
  check_surface(sample, surface);
  const std::size_t n = sample.n();
  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<double> column(n);
  double best = 0.0;
  for (std::size_t k = 0; k < surface.level_count(); ++k) {
    for (std::size_t g = 0; g < surface.grid_size(); ++g) {
      kernel_column(sample, family, surface.levels[k], surface.grid.point(g), column);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += xi[i] * (column[i] - surface.f_hat(g, k));
      best = std::max(best, std::abs(s / root_n / surface.sigma_hat(g, k)));
    }
  }
  return best;
}

std::vector<double> multiplier_vector(std::size_t n, std::uint64_t master_seed, std::size_t b) {
  std::vector<double> xi(n);
  Rng rng = child_rng(master_seed, Stream::multiplier, b);
  fill_standard_normal(rng, xi);
  return xi;
}

MultiplierDraws multiplier_draws(const Sample& sample, const KernelFamily& family,
                                 const StudentizedSurface& surface, std::size_t replications,
                                 std::uint64_t master_seed, double memory_budget_mb) {
  if (replications < kMinReplications)
    throw ParameterError("bootstrap needs at least " + std::to_string(kMinReplications) +
                         " replications");
  if (!(memory_budget_mb > 0.0)) throw ParameterError("memory budget must be positive");
  check_surface(sample, surface);

  const std::size_t n = sample.n();
  const std::size_t cells = surface.grid_size() * surface.level_count();
  const double budget_bytes = memory_budget_mb * 1024.0 * 1024.0;
  const auto cells_per_block = static_cast<std::size_t>(
      std::max(1.0, std::floor(budget_bytes / (8.0 * static_cast<double>(n)))));

  MultiplierDraws draws;
  draws.master_seed = master_seed;
  draws.sup_stats.assign(replications, 0.0);
  draws.streamed = cells_per_block < cells;

  const std::size_t chunks = (replications + kReplicateChunk - 1) / kReplicateChunk;
  Eigen::MatrixXd a;
  for (std::size_t first = 0; first < cells; first += cells_per_block) {
    const std::size_t count = std::min(cells_per_block, cells - first);
    fill_cells(sample, family, surface, first, count, a);
    parallel_for(chunks, [&](std::size_t chunk) {
      const std::size_t b0 = chunk * kReplicateChunk;
      const std::size_t width = std::min(kReplicateChunk, replications - b0);
      const Eigen::MatrixXd xi = multiplier_block(n, master_seed, b0, width);
      const Eigen::MatrixXd g = a.transpose() * xi;  // cells x width
      for (std::size_t c = 0; c < width; ++c) {
        const double m = g.col(static_cast<Eigen::Index>(c)).cwiseAbs().maxCoeff();
        draws.sup_stats[b0 + c] = std::max(draws.sup_stats[b0 + c], m);
      }
    });
  }
  return draws;
}

QuantileEstimate quantile_from_draws(const MultiplierDraws& draws, double alpha) {
  const std::size_t rank = quantile_rank(alpha, draws.replications());
  std::vector<double> sorted = draws.sup_stats;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end());
  QuantileEstimate q;
  q.value = sorted[rank - 1];
  q.alpha = alpha;
  q.replications = draws.replications();
  q.order_index = rank;
  return q;
}

QuantileEstimate bootstrap_quantile(const Sample& sample, const KernelFamily& family,
                                    const StudentizedSurface& surface, double alpha,
                                    std::size_t replications, std::uint64_t master_seed,
                                    double memory_budget_mb) {
  check_alpha(alpha);
  const MultiplierDraws draws =
      multiplier_draws(sample, family, surface, replications, master_seed, memory_budget_mb);
  return quantile_from_draws(draws, alpha);
}

}  // namespace ucband
