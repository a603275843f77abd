#include "ucband/gp_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ucband/bootstrap.hpp"
#include "ucband/error.hpp"
#include "ucband/parallel.hpp"

namespace ucband {

// ---------------------------------------------------------------------------
// Covariance models
// ---------------------------------------------------------------------------

CovarianceModel CovarianceModel::equicorrelated(std::size_t p, double rho) {
  if (p == 0) throw ParameterError("covariance dimension must be >= 1");
  if (p > 1 && !(rho >= -1.0 / static_cast<double>(p - 1) && rho <= 1.0))
    throw ParameterError("equicorrelation rho out of the PSD range");
  const auto n = static_cast<Eigen::Index>(p);
  CovarianceModel m;
  m.matrix = Eigen::MatrixXd::Constant(n, n, rho);
  m.matrix.diagonal().setOnes();
  m.label = "equicorrelated(" + std::to_string(rho) + ")";
  return m;
}

CovarianceModel CovarianceModel::brownian_grid(std::size_t p) {
  if (p == 0) throw ParameterError("covariance dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(p);
  CovarianceModel m;
  m.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = static_cast<double>(std::min(i, j) + 1);
      const double b = static_cast<double>(std::max(i, j) + 1);
      m.matrix(i, j) = i == j ? 1.0 : std::sqrt(a / b);
    }
  m.label = "brownian-grid";
  return m;
}

CovarianceModel CovarianceModel::random_gram(std::size_t p, std::size_t rank, Rng& rng) {
  if (p == 0 || rank == 0) throw ParameterError("random_gram needs p, rank >= 1");
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd v(static_cast<Eigen::Index>(rank), n);
  fill_standard_normal(rng, {v.data(), static_cast<std::size_t>(v.size())});
  for (Eigen::Index j = 0; j < n; ++j) v.col(j).normalize();
  CovarianceModel m;
  m.matrix = v.transpose() * v;
  m.matrix = 0.5 * (m.matrix + m.matrix.transpose()).eval();
  m.matrix.diagonal().setOnes();
  m.label = "random-gram(rank=" + std::to_string(rank) + ")";
  return m;
}

CovarianceModel CovarianceModel::from_surface(const Sample& sample, const KernelFamily& family,
                                              const StudentizedSurface& surface) {
  const Eigen::MatrixXd a = studentized_kernel_matrix(sample, family, surface);
  CovarianceModel m;
  m.matrix = a.transpose() * a;
  m.matrix = 0.5 * (m.matrix + m.matrix.transpose()).eval();
  m.label = "from-surface";
  return m;
}

CovarianceModel CovarianceModel::custom(Eigen::MatrixXd matrix, std::string label) {
  CovarianceModel m{std::move(matrix), std::move(label)};
  m.validate();
  return m;
}

void CovarianceModel::validate() const {
  if (matrix.rows() == 0 || matrix.rows() != matrix.cols())
    throw ParameterError("covariance must be a nonempty square matrix");
  if (!matrix.allFinite()) throw ParameterError("covariance has non-finite entries");
  if (((matrix - matrix.transpose()).cwiseAbs().array() > 1e-12).any())
    throw ParameterError("covariance is not symmetric");
  if (((matrix.diagonal().array() - 1.0).abs() > 1e-12).any())
    throw ParameterError("covariance diagonal must equal 1");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10)
    throw ParameterError("covariance is not positive semidefinite");
}

Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& cov) {
  for (double jitter : {0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8}) {
    Eigen::MatrixXd work = cov;
    work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  // Semidefinite but rank deficient: LDLT with pivoting tolerates zero pivots.
  Eigen::MatrixXd work = cov;
  work.diagonal().array() += 1e-8;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(work);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < -1e-10).any())
    throw NumericError("covariance is not positive semidefinite after maximal jitter");
  const Eigen::VectorXd root_d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd l = ldlt.matrixL();
  l = ldlt.transpositionsP().transpose() * (l * root_d.asDiagonal());
  return l;
}

// ---------------------------------------------------------------------------
// Suprema
// ---------------------------------------------------------------------------

double SupremumDraws::standard_deviation() const {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - a_hat) * (v - a_hat);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

SupremumDraws gaussian_sup_draws(const CovarianceModel& cov, std::size_t draws, SupMode mode,
                                 std::uint64_t seed) {
  if (draws < kMinGaussianDraws)
    throw ParameterError("gaussian_sup_draws needs at least " +
                         std::to_string(kMinGaussianDraws) + " draws");
  cov.validate();
  const Eigen::MatrixXd factor = jittered_cholesky(cov.matrix);
  const std::size_t p = cov.dimension();

  constexpr std::size_t chunk = 256;
  const std::size_t chunks = (draws + chunk - 1) / chunk;
  SupremumDraws out;
  out.mode = mode;
  out.seed = seed;
  out.values.assign(draws, 0.0);

  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t first = c * chunk;
    const std::size_t width = std::min(chunk, draws - first);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(width));
    Rng rng = child_rng(seed, Stream::gaussian, c);
    fill_standard_normal(rng, {z.data(), static_cast<std::size_t>(z.size())});
    const Eigen::MatrixXd x = factor * z;
    for (std::size_t k = 0; k < width; ++k) {
      const auto col = x.col(static_cast<Eigen::Index>(k));
      out.values[first + k] = mode == SupMode::abs_sup ? col.cwiseAbs().maxCoeff() : col.maxCoeff();
    }
  });
  out.a_hat = std::accumulate(out.values.begin(), out.values.end(), 0.0) /
              static_cast<double>(draws);
  return out;
}

ConcentrationEstimate levy_concentration(const SupremumDraws& draws, double epsilon) {
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  if (draws.values.empty()) throw ParameterError("levy_concentration needs draws");

  std::vector<double> sorted = draws.values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();

  // Some maximising window [x - eps, x + eps] has a draw on its left edge, so
  // sliding over left edges gives the exact empirical supremum.
  std::size_t best = 0, best_left = 0, right = 0;
  for (std::size_t left = 0; left < m; ++left) {
    if (right < left) right = left;
    const double edge = sorted[left] + 2.0 * epsilon;
    while (right < m && sorted[right] <= edge) ++right;
    if (right - left > best) {
      best = right - left;
      best_left = left;
    }
  }

  ConcentrationEstimate e;
  e.epsilon = epsilon;
  e.p_hat = static_cast<double>(best) / static_cast<double>(m);
  e.center = sorted[best_left] + epsilon;
  e.mcse = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(m));
  e.bound = 4.0 * epsilon * (draws.a_hat + 1.0);
  return e;
}

AnticoncentrationReport check_anticoncentration(const CovarianceModel& cov,
                                                const std::vector<double>& epsilons,
                                                std::size_t draws, std::uint64_t seed,
                                                SupMode mode) {
  const SupremumDraws d = gaussian_sup_draws(cov, draws, mode, seed);
  AnticoncentrationReport report;
  report.label = cov.label;
  report.dimension = cov.dimension();
  report.mode = mode;
  report.draws = draws;
  report.a_hat = d.a_hat;
  const double a_se = d.standard_deviation() / std::sqrt(static_cast<double>(draws));
  for (double eps : epsilons) {
    const ConcentrationEstimate c = levy_concentration(d, eps);
    AnticoncentrationRow row;
    row.epsilon = eps;
    row.p_hat = c.p_hat;
    row.mcse = c.mcse;
    row.bound = c.bound;
    row.slack = 3.0 * c.mcse + 4.0 * eps * 3.0 * a_se;
    row.margin = row.bound + row.slack - row.p_hat;
    row.pass = row.margin >= 0.0;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<CovarianceModel> random_covariance_battery(std::size_t count, std::size_t p_min,
                                                       std::size_t p_max, std::uint64_t seed) {
  if (p_min < 1 || p_max < p_min) throw ParameterError("battery needs 1 <= p_min <= p_max");
  std::vector<CovarianceModel> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = child_rng(seed, Stream::battery, i);
    const std::size_t p = std::uniform_int_distribution<std::size_t>(p_min, p_max)(rng);
    const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, 2 * p)(rng);
    CovarianceModel m = CovarianceModel::random_gram(p, rank, rng);
    m.label = "random-gram(p=" + std::to_string(p) + ",rank=" + std::to_string(rank) + ")";
    out.push_back(std::move(m));
  }
  return out;
}

double oracle_max_gaussian_quantile(const CovarianceModel& cov, double alpha, std::size_t draws,
                                    std::uint64_t seed) {
  const std::size_t rank = quantile_rank(alpha, draws);
  SupremumDraws d = gaussian_sup_draws(cov, draws, SupMode::abs_sup, seed);
  std::nth_element(d.values.begin(), d.values.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   d.values.end());
  return d.values[rank - 1];
}

double quantile_mcse(std::vector<double> values, double alpha) {
  const std::size_t m = values.size();
  if (m < 10) throw ParameterError("quantile_mcse needs at least 10 values");
  std::sort(values.begin(), values.end());
  const std::size_t rank = quantile_rank(alpha, m);
  const auto half = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
  const std::size_t lo = rank > half ? rank - half : 1;
  const std::size_t hi = std::min(m, rank + half);
  const double spread = values[hi - 1] - values[lo - 1];
  if (!(spread > 0.0)) return 0.0;
  const double density = static_cast<double>(hi - lo) / static_cast<double>(m) / spread;
  return std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(m)) / density;
}

}  // namespace ucband
