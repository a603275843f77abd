#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ucband/kernels.hpp"

namespace ucband {

/// n i.i.d. observations in R^d. Rows are kept in lexicographic order so that
/// every downstream computation is invariant to the input row order.
class Sample {
 public:
  Sample(std::vector<double> row_major, std::size_t dimension);

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * d_, d_}; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::vector<double> data_;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
};

/// Finite set of evaluation points discretising the band region X.
class EvalGrid {
 public:
  EvalGrid() = default;

  /// Tensor grid of cell midpoints over the box [lower, upper]; `total_points`
  /// is split as round(total^{1/d}) points per axis.
  static EvalGrid uniform(std::vector<double> lower, std::vector<double> upper,
                          std::size_t total_points);
  /// Explicit points (row-major); every point must lie in [lower, upper].
  static EvalGrid from_points(std::vector<double> row_major, std::vector<double> lower,
                              std::vector<double> upper);

  std::size_t size() const noexcept { return points_.size() / d_; }
  std::size_t d() const noexcept { return d_; }
  std::span<const double> point(std::size_t i) const { return {points_.data() + i * d_, d_}; }
  std::span<const double> data() const noexcept { return points_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

 private:
  std::vector<double> points_;
  std::vector<double> lower_, upper_;
  std::size_t d_ = 1;
};

/// Candidate resolutions, strictly increasing with gaps <= spacing.
struct ResolutionGrid {
  std::vector<double> levels;
  double spacing = 1.0;

  static ResolutionGrid range(double l_min, double l_max, double spacing);
  static ResolutionGrid explicit_levels(std::vector<double> levels, double spacing);
  /// Throws ParameterError unless every level is valid for `family`.
  void validate(const KernelFamily& family) const;
};

enum class DegeneracyPolicy { error, drop_level };

inline constexpr double kDegeneracyFloor = 1e-12;

/// f_hat(x, l) and sigma_hat(x, l) over grid x levels.
struct StudentizedSurface {
  Eigen::MatrixXd f_hat;      // |grid| x |levels|
  Eigen::MatrixXd sigma_hat;  // |grid| x |levels|
  std::vector<double> levels;
  std::vector<double> dropped_levels;
  EvalGrid grid;
  std::size_t n = 0;
  std::string kernel_id;

  std::size_t grid_size() const noexcept { return static_cast<std::size_t>(f_hat.rows()); }
  std::size_t level_count() const noexcept { return levels.size(); }
  /// Column of level l, or -1.
  std::ptrdiff_t level_index(double l) const noexcept;
  std::ptrdiff_t require_level(double l) const;
};

/// out[i] = K_l(X_i, x) for every sample row.
void kernel_column(const Sample& sample, const KernelFamily& family, double l,
                   std::span<const double> x, std::span<double> out);

/// (1/n) sum_i K_l(X_i, x).
double density_estimate(const Sample& sample, const KernelFamily& family, double l,
                        std::span<const double> x);

struct SigmaEstimate {
  double value = 0.0;     // sqrt of the clamped radicand
  double radicand = 0.0;  // (1/n) sum K^2 - f_hat^2
  bool degenerate = false;
};

SigmaEstimate sigma_hat(const Sample& sample, const KernelFamily& family, double l,
                        std::span<const double> x, double floor = kDegeneracyFloor);

StudentizedSurface build_surface(const Sample& sample, const KernelFamily& family,
                                 const EvalGrid& xgrid, const ResolutionGrid& lgrid,
                                 DegeneracyPolicy policy, double floor = kDegeneracyFloor);

}  // namespace ucband
