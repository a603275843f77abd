#include <doctest.h>

#include <cmath>
#include <random>

#include "ucband/error.hpp"
#include "ucband/gp_lab.hpp"

using namespace ucband;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("covariance constructors") {
  const auto e = CovarianceModel::equicorrelated(4, 0.3);
  CHECK(e.matrix(0, 1) == 0.3);
  CHECK(e.matrix(2, 2) == 1.0);
  CHECK_NOTHROW(e.validate());
  CHECK_THROWS_AS(CovarianceModel::equicorrelated(3, -0.6), ParameterError);
  CHECK_THROWS_AS(CovarianceModel::equicorrelated(0, 0.1), ParameterError);

  const auto b = CovarianceModel::brownian_grid(4);
  CHECK(b.matrix(0, 3) == doctest::Approx(0.5));
  CHECK_NOTHROW(b.validate());

  Rng rng = child_rng(3, Stream::battery, 0);
  const auto g = CovarianceModel::random_gram(30, 4, rng);
  CHECK_NOTHROW(g.validate());

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(CovarianceModel::custom(bad), ParameterError);
  bad << 2.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(CovarianceModel::custom(bad), ParameterError);
  bad << 1.0, 0.2, 0.1, 1.0;
  CHECK_THROWS_AS(CovarianceModel::custom(bad), ParameterError);
}

TEST_CASE("jittered Cholesky reproduces rank-deficient covariances") {
  const auto one = CovarianceModel::equicorrelated(6, 1.0);
  const Eigen::MatrixXd l = jittered_cholesky(one.matrix);
  CHECK((l * l.transpose() - one.matrix).cwiseAbs().maxCoeff() < 1e-6);
  Rng rng = child_rng(5, Stream::battery, 1);
  const auto g = CovarianceModel::random_gram(40, 2, rng);
  const Eigen::MatrixXd lg = jittered_cholesky(g.matrix);
  CHECK((lg * lg.transpose() - g.matrix).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("singleton supremum mean is sqrt(2/pi)") {
  const auto d = gaussian_sup_draws(CovarianceModel::equicorrelated(1, 0.0), 100000,
                                    SupMode::abs_sup, 1);
  CHECK(std::abs(d.a_hat - std::sqrt(2.0 / M_PI)) <= 0.01);
  CHECK_THROWS_AS(gaussian_sup_draws(CovarianceModel::equicorrelated(1, 0.0), 999,
                                     SupMode::abs_sup, 1),
                  ParameterError);
}

TEST_CASE("comonotone equicorrelation behaves like one coordinate") {
  const auto single = gaussian_sup_draws(CovarianceModel::equicorrelated(1, 0.0), 20000,
                                         SupMode::signed_sup, 7);
  const auto many = gaussian_sup_draws(CovarianceModel::equicorrelated(25, 1.0), 20000,
                                       SupMode::signed_sup, 7);
  // Same law; the jitter makes the draws differ only slightly.
  CHECK(std::abs(single.a_hat - many.a_hat) <= 4.0 * 1.0 / std::sqrt(20000.0));
  CHECK(std::abs(single.standard_deviation() - many.standard_deviation()) <= 0.03);
  const double q1 = oracle_max_gaussian_quantile(CovarianceModel::equicorrelated(1, 0.0), 0.05, 100000, 3);
  const double q50 = oracle_max_gaussian_quantile(CovarianceModel::equicorrelated(50, 1.0), 0.05, 100000, 4);
  CHECK(std::abs(q1 - q50) <= 0.03);
}

TEST_CASE("max of two independent normals has mean 1/sqrt(pi)") {
  const auto d = gaussian_sup_draws(CovarianceModel::equicorrelated(2, 0.0), 100000,
                                    SupMode::signed_sup, 11);
  CHECK(std::abs(d.a_hat - 1.0 / std::sqrt(M_PI)) <= 0.01);
}

TEST_CASE("Levy concentration") {
  const auto d = gaussian_sup_draws(CovarianceModel::equicorrelated(1, 0.0), 100000,
                                    SupMode::signed_sup, 13);
  const auto zero = levy_concentration(d, 0.0);
  CHECK(zero.p_hat == doctest::Approx(1.0 / 100000.0));
  const double range = *std::max_element(d.values.begin(), d.values.end()) -
                       *std::min_element(d.values.begin(), d.values.end());
  CHECK(levy_concentration(d, range).p_hat == 1.0);
  CHECK(levy_concentration(d, 2.0 * range).p_hat == 1.0);

  const auto c = levy_concentration(d, 0.1);
  const double exact = 2.0 * normal_cdf(0.1) - 1.0;
  CHECK(exact == doctest::Approx(0.0797).epsilon(1e-3));
  // The window maximum is biased upward by a few standard errors.
  CHECK(std::abs(c.p_hat - exact) <= 3.0 * c.mcse + 0.004);
  CHECK(std::abs(c.center) < 0.3);
  CHECK(c.bound == doctest::Approx(0.4 * (d.a_hat + 1.0)));
  CHECK_THROWS_AS(levy_concentration(d, -0.1), ParameterError);

  double previous = 0.0;
  for (double eps : {0.0, 0.01, 0.05, 0.1, 0.2, 0.5}) {
    const double p = levy_concentration(d, eps).p_hat;
    CHECK(p >= previous);
    previous = p;
  }
}

TEST_CASE("Levy concentration ties") {
  SupremumDraws d;
  d.values = {1.0, 1.0, 1.0, 2.0, 3.0, 3.0};
  d.a_hat = 11.0 / 6.0;
  CHECK(levy_concentration(d, 0.0).p_hat == doctest::Approx(0.5));
  CHECK(levy_concentration(d, 0.5).p_hat == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("anticoncentration examples") {
  const auto single = check_anticoncentration(CovarianceModel::equicorrelated(1, 0.0), {0.0, 0.1},
                                              100000, 17);
  CHECK(single.all_pass);
  CHECK(single.rows[1].bound == doctest::Approx(0.719).epsilon(0.01));
  // |Z| has density 2 phi near 0, so the busiest window is [0, 0.2].
  CHECK(single.rows[1].p_hat == doctest::Approx(2.0 * normal_cdf(0.2) - 1.0).epsilon(0.05));
  const auto signed_single = check_anticoncentration(CovarianceModel::equicorrelated(1, 0.0),
                                                     {0.1}, 100000, 17, SupMode::signed_sup);
  CHECK(signed_single.rows[0].p_hat < 0.09);
  CHECK(signed_single.all_pass);
  CHECK(single.rows[0].bound == 0.0);
  CHECK(single.rows[0].p_hat <= 3.0 * single.rows[0].mcse + 1e-4);

  const auto eq = check_anticoncentration(CovarianceModel::equicorrelated(100, 0.5),
                                          {0.01, 0.05, 0.1}, 200000, 19);
  for (const auto& row : eq.rows) CHECK(row.p_hat <= row.bound + 3.0 * row.mcse);
}

TEST_CASE("oracle quantile") {
  const double q = oracle_max_gaussian_quantile(CovarianceModel::equicorrelated(1, 0.0), 0.05,
                                                100000, 23);
  CHECK(std::abs(q - 1.959964) <= 0.02);
  CHECK(oracle_max_gaussian_quantile(CovarianceModel::equicorrelated(10, 0.2), 0.05, 5000, 1) ==
        oracle_max_gaussian_quantile(CovarianceModel::equicorrelated(10, 0.2), 0.05, 5000, 1));
  CHECK(oracle_max_gaussian_quantile(CovarianceModel::equicorrelated(10, 0.2), 0.1, 5000, 1) <=
        oracle_max_gaussian_quantile(CovarianceModel::equicorrelated(10, 0.2), 0.05, 5000, 1));
}

TEST_CASE("quantile Monte Carlo standard error") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> z;
  std::vector<double> v(100000);
  for (double& x : v) x = z(rng);
  // Asymptotic value: sqrt(a (1 - a) / m) / phi(q).
  const double qa = 1.644854;
  const double phi = std::exp(-0.5 * qa * qa) / std::sqrt(2.0 * M_PI);
  const double want = std::sqrt(0.05 * 0.95 / 100000.0) / phi;
  CHECK(quantile_mcse(v, 0.05) == doctest::Approx(want).epsilon(0.1));
  CHECK_THROWS_AS(quantile_mcse({1.0, 2.0}, 0.05), ParameterError);
}

TEST_CASE("draws are deterministic and thread-count independent") {
  const auto cov = CovarianceModel::brownian_grid(30);
  const auto a = gaussian_sup_draws(cov, 3000, SupMode::abs_sup, 31);
  const auto b = gaussian_sup_draws(cov, 3000, SupMode::abs_sup, 31);
  CHECK(a.values == b.values);
  setenv("UCBAND_THREADS", "4", 1);
  const auto c = gaussian_sup_draws(cov, 3000, SupMode::abs_sup, 31);
  unsetenv("UCBAND_THREADS");
  CHECK(a.values == c.values);
  const auto s = gaussian_sup_draws(cov, 3000, SupMode::signed_sup, 31);
  for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(s.values[i] <= a.values[i]);
}

TEST_CASE("random covariance battery") {
  const auto battery = random_covariance_battery(12, 5, 200, 37);
  REQUIRE(battery.size() == 12);
  bool low_rank = false;
  for (const auto& m : battery) {
    CHECK(m.dimension() >= 5);
    CHECK(m.dimension() <= 200);
    CHECK_NOTHROW(m.validate());
    const auto rank_pos = m.label.find("rank=");
    REQUIRE(rank_pos != std::string::npos);
    if (std::stoul(m.label.substr(rank_pos + 5)) < m.dimension()) low_rank = true;
  }
  CHECK(low_rank);
  const auto again = random_covariance_battery(12, 5, 200, 37);
  CHECK(again[3].matrix == battery[3].matrix);
  CHECK_THROWS_AS(random_covariance_battery(3, 10, 5, 1), ParameterError);
}
