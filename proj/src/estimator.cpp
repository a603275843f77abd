#include "ucband/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ucband/error.hpp"
#include "ucband/parallel.hpp"

namespace ucband {

// ---------------------------------------------------------------------------
// Sample
// ---------------------------------------------------------------------------

Sample::Sample(std::vector<double> row_major, std::size_t dimension) : d_(dimension) {
  if (d_ == 0) throw ParameterError("sample dimension must be >= 1");
  if (row_major.size() % d_ != 0) throw DataError("sample size is not a multiple of d");
  n_ = row_major.size() / d_;
  if (n_ < 2) throw DataError("sample needs n >= 2 observations");
  for (std::size_t k = 0; k < row_major.size(); ++k)
    if (!std::isfinite(row_major[k]))
      throw DataError("non-finite coordinate in row " + std::to_string(k / d_ + 1));

  if (d_ == 1) {
    std::sort(row_major.begin(), row_major.end());
    data_ = std::move(row_major);
    return;
  }
  std::vector<std::size_t> order(n_);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row_major.begin() + a * d_, row_major.begin() + (a + 1) * d_,
                                        row_major.begin() + b * d_, row_major.begin() + (b + 1) * d_);
  });
  data_.resize(row_major.size());
  for (std::size_t i = 0; i < n_; ++i)
    std::copy_n(row_major.begin() + order[i] * d_, d_, data_.begin() + i * d_);
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

namespace {

void check_box(const std::vector<double>& lower, const std::vector<double>& upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw ParameterError("grid bounds must be nonempty and of equal dimension");
  for (std::size_t m = 0; m < lower.size(); ++m)
    if (!(std::isfinite(lower[m]) && std::isfinite(upper[m]) && upper[m] > lower[m]))
      throw ParameterError("grid bounds must satisfy lower < upper");
}

}  // namespace

EvalGrid EvalGrid::uniform(std::vector<double> lower, std::vector<double> upper,
                           std::size_t total_points) {
  check_box(lower, upper);
  if (total_points == 0) throw ParameterError("grid needs at least one point");
  const std::size_t d = lower.size();
  const auto per_axis = static_cast<std::size_t>(std::max(
      1.0, std::round(std::pow(static_cast<double>(total_points), 1.0 / static_cast<double>(d)))));

  EvalGrid g;
  g.d_ = d;
  std::size_t total = 1;
  for (std::size_t m = 0; m < d; ++m) total *= per_axis;
  g.points_.resize(total * d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t m = 0; m < d; ++m) {
      const double width = (upper[m] - lower[m]) / static_cast<double>(per_axis);
      g.points_[p * d + m] = lower[m] + (static_cast<double>(idx[m]) + 0.5) * width;
    }
    for (std::size_t m = d; m-- > 0;) {
      if (++idx[m] < per_axis) break;
      idx[m] = 0;
    }
  }
  g.lower_ = std::move(lower);
  g.upper_ = std::move(upper);
  return g;
}

EvalGrid EvalGrid::from_points(std::vector<double> row_major, std::vector<double> lower,
                               std::vector<double> upper) {
  check_box(lower, upper);
  const std::size_t d = lower.size();
  if (row_major.empty() || row_major.size() % d != 0)
    throw ParameterError("grid points must be a nonempty multiple of d");
  const std::size_t count = row_major.size() / d;

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row_major.begin() + a * d, row_major.begin() + (a + 1) * d,
                                        row_major.begin() + b * d, row_major.begin() + (b + 1) * d);
  };
  std::sort(order.begin(), order.end(), row_less);

  EvalGrid g;
  g.d_ = d;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t r = order[k];
    if (k > 0 && !row_less(order[k - 1], r)) continue;  // duplicate
    for (std::size_t m = 0; m < d; ++m) {
      const double v = row_major[r * d + m];
      if (!(v >= lower[m] && v <= upper[m]))
        throw ParameterError("grid point outside the band region");
      g.points_.push_back(v);
    }
  }
  g.lower_ = std::move(lower);
  g.upper_ = std::move(upper);
  return g;
}

ResolutionGrid ResolutionGrid::range(double l_min, double l_max, double spacing) {
  if (!(spacing > 0.0 && spacing <= 1.0))
    throw ParameterError("level spacing must lie in (0, 1]");
  if (!(std::isfinite(l_min) && std::isfinite(l_max) && l_max >= l_min))
    throw ParameterError("level range needs finite l_min <= l_max");
  ResolutionGrid g;
  g.spacing = spacing;
  const auto steps = static_cast<long>(std::floor((l_max - l_min) / spacing + 1e-9));
  for (long k = 0; k <= steps; ++k) g.levels.push_back(l_min + static_cast<double>(k) * spacing);
  if (l_max - g.levels.back() > 1e-9) g.levels.push_back(l_max);
  return g;
}

ResolutionGrid ResolutionGrid::explicit_levels(std::vector<double> levels, double spacing) {
  ResolutionGrid g{std::move(levels), spacing};
  if (g.levels.empty()) throw ParameterError("level grid must be nonempty");
  if (!(spacing > 0.0 && spacing <= 1.0))
    throw ParameterError("level spacing must lie in (0, 1]");
  for (std::size_t k = 1; k < g.levels.size(); ++k) {
    const double gap = g.levels[k] - g.levels[k - 1];
    if (!(gap > 0.0)) throw ParameterError("levels must be strictly increasing");
    if (gap > spacing + 1e-9) throw ParameterError("level gap exceeds the declared spacing");
  }
  return g;
}

void ResolutionGrid::validate(const KernelFamily& family) const {
  if (levels.empty()) throw ParameterError("level grid must be nonempty");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    family.check_level(levels[k]);
    if (k > 0 && !(levels[k] > levels[k - 1]))
      throw ParameterError("levels must be strictly increasing");
  }
}

std::ptrdiff_t StudentizedSurface::level_index(double l) const noexcept {
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (levels[k] == l) return static_cast<std::ptrdiff_t>(k);
  return -1;
}

std::ptrdiff_t StudentizedSurface::require_level(double l) const {
  const auto k = level_index(l);
  if (k < 0) throw ParameterError("level " + std::to_string(l) + " is not in the surface");
  return k;
}

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

namespace {

struct CellStats {
  double mean = 0.0;
  double variance = 0.0;  // 1/n normalisation
};

// Two-pass mean and variance of K_l(X_i, x) over the sample.
CellStats cell_stats(const Sample& sample, const KernelFamily& family, double l,
                     std::span<const double> x, std::vector<double>& scratch) {
  const std::size_t n = sample.n();
  scratch.resize(n);
  kernel_column(sample, family, l, x, scratch);
  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (double v : scratch) sum += v;
  CellStats s;
  s.mean = sum * inv_n;
  double ss = 0.0;
  for (double v : scratch) ss += (v - s.mean) * (v - s.mean);
  s.variance = ss * inv_n;
  return s;
}

}  // namespace

void kernel_column(const Sample& sample, const KernelFamily& family, double l,
                   std::span<const double> x, std::span<double> out) {
  if (out.size() != sample.n()) throw ParameterError("kernel_column: output size mismatch");
  const double reach = family.reach(l);
  if (sample.d() == 1 && std::isfinite(reach)) {
    // Sorted one-dimensional data: only a contiguous block can be nonzero.
    family.check_level(l);
    family.check_point(x);
    std::fill(out.begin(), out.end(), 0.0);
    const auto data = sample.data();
    const auto lo = std::lower_bound(data.begin(), data.end(), x[0] - reach) - data.begin();
    const auto hi = std::upper_bound(data.begin(), data.end(), x[0] + reach) - data.begin();
    if (hi > lo) family.eval_column(l, data.subspan(lo, hi - lo), x, out.subspan(lo, hi - lo));
    return;
  }
  family.eval_column(l, sample.data(), x, out);
}

double density_estimate(const Sample& sample, const KernelFamily& family, double l,
                        std::span<const double> x) {
  std::vector<double> scratch;
  return cell_stats(sample, family, l, x, scratch).mean;
}

SigmaEstimate sigma_hat(const Sample& sample, const KernelFamily& family, double l,
                        std::span<const double> x, double floor) {
  std::vector<double> scratch;
  const CellStats s = cell_stats(sample, family, l, x, scratch);
  SigmaEstimate out;
  out.radicand = s.variance;
  out.value = std::sqrt(std::max(0.0, s.variance));
  out.degenerate = !(s.variance > floor);
  return out;
}

StudentizedSurface build_surface(const Sample& sample, const KernelFamily& family,
                                 const EvalGrid& xgrid, const ResolutionGrid& lgrid,
                                 DegeneracyPolicy policy, double floor) {
  if (static_cast<int>(sample.d()) != family.dimension() || xgrid.d() != sample.d())
    throw ParameterError("sample, grid and kernel dimensions disagree");
  lgrid.validate(family);
  for (std::size_t i = 0; i < sample.n(); ++i) family.check_point(sample.row(i));

  const std::size_t gsize = xgrid.size();
  const std::size_t lsize = lgrid.levels.size();
  Eigen::MatrixXd f(gsize, lsize), sigma(gsize, lsize);
  std::vector<char> degenerate(gsize * lsize, 0);

  parallel_for(lsize, [&](std::size_t k) {
    std::vector<double> scratch;
    for (std::size_t g = 0; g < gsize; ++g) {
      const CellStats s = cell_stats(sample, family, lgrid.levels[k], xgrid.point(g), scratch);
      f(g, k) = s.mean;
      sigma(g, k) = std::sqrt(std::max(0.0, s.variance));
      degenerate[k * gsize + g] = !(s.variance > floor);
    }
  });

  StudentizedSurface surface;
  surface.grid = xgrid;
  surface.n = sample.n();
  surface.kernel_id = family.id();

  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < lsize; ++k) {
    const bool bad = std::any_of(degenerate.begin() + k * gsize,
                                 degenerate.begin() + (k + 1) * gsize,
                                 [](char c) { return c != 0; });
    if (!bad) {
      keep.push_back(k);
      continue;
    }
    if (policy == DegeneracyPolicy::error)
      throw UnusableSurfaceError("degenerate sigma_hat at level " +
                                 std::to_string(lgrid.levels[k]) +
                                 " (zero empirical variance of kernel values)");
    surface.dropped_levels.push_back(lgrid.levels[k]);
  }
  if (keep.empty()) throw UnusableSurfaceError("no resolution level survives degeneracy checks");

  surface.f_hat.resize(gsize, keep.size());
  surface.sigma_hat.resize(gsize, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    surface.f_hat.col(c) = f.col(keep[c]);
    surface.sigma_hat.col(c) = sigma.col(keep[c]);
    surface.levels.push_back(lgrid.levels[keep[c]]);
  }
  return surface;
}

}  // namespace ucband
