#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ucband/estimator.hpp"
#include "ucband/rng.hpp"

namespace ucband {

/// Correlation matrix of a centred unit-variance Gaussian vector.
struct CovarianceModel {
  Eigen::MatrixXd matrix;
  std::string label;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix.rows()); }

  static CovarianceModel equicorrelated(std::size_t p, double rho);
  /// Correlation of Brownian motion at times k/p, k = 1..p: sqrt(min/max).
  static CovarianceModel brownian_grid(std::size_t p);
  /// Normalised Gram matrix of p random Gaussian vectors in R^rank.
  static CovarianceModel random_gram(std::size_t p, std::size_t rank, Rng& rng);
  /// Empirical correlation of the studentized kernel columns of a surface.
  static CovarianceModel from_surface(const Sample& sample, const KernelFamily& family,
                                      const StudentizedSurface& surface);
  static CovarianceModel custom(Eigen::MatrixXd matrix, std::string label = "custom");

  /// Throws ParameterError unless symmetric, unit diagonal and PSD (to 1e-10).
  void validate() const;
};

/// Lower Cholesky factor with diagonal jitter escalating 1e-12 .. 1e-8.
Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& cov);

enum class SupMode { signed_sup, abs_sup };

struct SupremumDraws {
  std::vector<double> values;
  SupMode mode = SupMode::abs_sup;
  double a_hat = 0.0;  // mean(values)
  std::uint64_t seed = 0;

  double standard_deviation() const;
};

inline constexpr std::size_t kMinGaussianDraws = 1000;

SupremumDraws gaussian_sup_draws(const CovarianceModel& cov, std::size_t draws, SupMode mode,
                                 std::uint64_t seed);

struct ConcentrationEstimate {
  double epsilon = 0.0;
  double p_hat = 0.0;   // max over windows [x - eps, x + eps] of the draw fraction
  double center = 0.0;  // a maximising window centre
  double mcse = 0.0;
  double bound = 0.0;   // 4 eps (a_hat + 1)
};

ConcentrationEstimate levy_concentration(const SupremumDraws& draws, double epsilon);

struct AnticoncentrationRow {
  double epsilon = 0.0;
  double p_hat = 0.0;
  double mcse = 0.0;
  double bound = 0.0;
  double slack = 0.0;   // 3 mcse + 4 eps * 3 sd / sqrt(M)
  double margin = 0.0;  // bound + slack - p_hat
  bool pass = false;
};

struct AnticoncentrationReport {
  std::string label;
  std::size_t dimension = 0;
  SupMode mode = SupMode::abs_sup;
  std::size_t draws = 0;
  double a_hat = 0.0;
  std::vector<AnticoncentrationRow> rows;
  bool all_pass = true;
};

AnticoncentrationReport check_anticoncentration(const CovarianceModel& cov,
                                                const std::vector<double>& epsilons,
                                                std::size_t draws, std::uint64_t seed,
                                                SupMode mode = SupMode::abs_sup);

/// `count` normalised Gram matrices with p uniform on [p_min, p_max] and the
/// rank uniform on [1, 2p], so low-rank and full-rank models are mixed.
std::vector<CovarianceModel> random_covariance_battery(std::size_t count, std::size_t p_min,
                                                       std::size_t p_max, std::uint64_t seed);

/// (1 - alpha)-quantile of abs-sup draws, same rank convention as the bootstrap.
double oracle_max_gaussian_quantile(const CovarianceModel& cov, double alpha, std::size_t draws,
                                    std::uint64_t seed);

/// Asymptotic Monte Carlo standard error of the (1 - alpha) sample quantile,
/// with the density at the quantile estimated from order-statistic spacings.
double quantile_mcse(std::vector<double> values, double alpha);

}  // namespace ucband
