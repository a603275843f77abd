#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "ucband/bootstrap.hpp"
#include "ucband/error.hpp"
#include "ucband/gp_lab.hpp"

using namespace ucband;

namespace {

std::vector<double> uniform_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

struct Setup {
  Sample sample;
  KernelFamily family;
  StudentizedSurface surface;
};

Setup make_setup(std::size_t n, std::size_t grid_points, std::vector<double> levels,
                 const char* kernel = "epanechnikov", std::uint64_t seed = 1) {
  Sample s(uniform_points(n, seed), 1);
  auto fam = KernelFamily::from_name(kernel, 1);
  auto grid = EvalGrid::uniform({0.25}, {0.75}, grid_points);
  auto surf = build_surface(s, fam, grid, ResolutionGrid::explicit_levels(std::move(levels), 1.0),
                            DegeneracyPolicy::error);
  return {std::move(s), std::move(fam), std::move(surf)};
}

}  // namespace

TEST_CASE("quantile rank convention") {
  CHECK(quantile_rank(0.05, 1000) == 950);
  CHECK(quantile_rank(0.1, 100) == 90);
  CHECK(quantile_rank(0.1, 1000) == 900);
  CHECK(quantile_rank(0.001, 100) == 100);
  CHECK(quantile_rank(0.999, 100) == 1);
  CHECK(quantile_rank(0.05, 101) == 96);
  CHECK_THROWS_AS(quantile_rank(0.0, 100), ParameterError);
  CHECK_THROWS_AS(quantile_rank(1.0, 100), ParameterError);
}

TEST_CASE("multiplier_sup_draw examples") {
  const Setup st = make_setup(200, 16, {2.0, 3.0});
  SUBCASE("zero multipliers") {
    const std::vector<double> xi(200, 0.0);
    CHECK(multiplier_sup_draw(st.sample, st.family, st.surface, xi) == 0.0);
  }
  SUBCASE("length mismatch") {
    const std::vector<double> xi(199, 1.0);
    CHECK_THROWS_AS(multiplier_sup_draw(st.sample, st.family, st.surface, xi), ParameterError);
  }
  SUBCASE("sign flip leaves the statistic unchanged") {
    auto xi = multiplier_vector(200, 9, 0);
    const double a = multiplier_sup_draw(st.sample, st.family, st.surface, xi);
    for (double& v : xi) v = -v;
    CHECK(multiplier_sup_draw(st.sample, st.family, st.surface, xi) == a);
  }
}

TEST_CASE("two-point single-cell draw equals sqrt(2)") {
  const Sample s({-0.5, 0.5}, 1);
  const auto epa = KernelFamily::from_name("epanechnikov", 1);
  const auto grid = EvalGrid::from_points({0.5}, {0.0}, {1.0});
  const auto surf = build_surface(s, epa, grid, ResolutionGrid::explicit_levels({0.0}, 1.0),
                                  DegeneracyPolicy::error);
  CHECK(surf.f_hat(0, 0) == 0.375);
  CHECK(surf.sigma_hat(0, 0) == doctest::Approx(0.375).epsilon(1e-15));
  const std::vector<double> xi{1.0, -1.0};
  CHECK(multiplier_sup_draw(s, epa, surf, xi) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("identical observations cannot form a surface") {
  const Sample s({0.4, 0.4}, 1);
  CHECK_THROWS_AS(build_surface(s, KernelFamily::from_name("epanechnikov", 1),
                                EvalGrid::from_points({0.4}, {0.0}, {1.0}),
                                ResolutionGrid::explicit_levels({0.0}, 1.0),
                                DegeneracyPolicy::error),
                  UnusableSurfaceError);
}

TEST_CASE("single-cell quantile is the two-sided normal quantile") {
  const Sample s(uniform_points(2000, 4), 1);
  const auto epa = KernelFamily::from_name("epanechnikov", 1);
  const auto grid = EvalGrid::from_points({0.5}, {0.0}, {1.0});
  const auto surf = build_surface(s, epa, grid, ResolutionGrid::explicit_levels({2.0}, 1.0),
                                  DegeneracyPolicy::error);
  const auto q = bootstrap_quantile(s, epa, surf, 0.05, 100000, 77);
  CHECK(q.value == doctest::Approx(1.959964).epsilon(0.03 / 1.96));
  CHECK(std::abs(q.value - 1.959964) <= 0.03);
  CHECK(q.order_index == 95000);
  CHECK(q.replications == 100000);
}

TEST_CASE("draw routes agree") {
  const Setup st = make_setup(300, 12, {2.0, 2.5, 3.0});
  const auto draws = multiplier_draws(st.sample, st.family, st.surface, 130, 5);
  CHECK_FALSE(draws.streamed);
  for (std::size_t b : {0u, 1u, 63u, 64u, 129u}) {
    const auto xi = multiplier_vector(300, 5, b);
    const double direct = multiplier_sup_draw(st.sample, st.family, st.surface, xi);
    CHECK(draws.sup_stats[b] == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("streaming fallback matches the materialised matrix") {
  const Setup st = make_setup(500, 32, {2.0, 3.0, 4.0});
  const auto full = multiplier_draws(st.sample, st.family, st.surface, 200, 8);
  // 500 rows x 8 bytes x 10 cells per block.
  const auto streamed = multiplier_draws(st.sample, st.family, st.surface, 200, 8,
                                         500.0 * 8.0 * 10.0 / (1024.0 * 1024.0));
  CHECK(streamed.streamed);
  REQUIRE(streamed.sup_stats.size() == full.sup_stats.size());
  for (std::size_t b = 0; b < full.sup_stats.size(); ++b)
    CHECK(streamed.sup_stats[b] == doctest::Approx(full.sup_stats[b]).epsilon(1e-12));
}

TEST_CASE("draws are deterministic, nonnegative and independent of the worker count") {
  const Setup st = make_setup(400, 20, {2.0, 3.0});
  const auto a = multiplier_draws(st.sample, st.family, st.surface, 300, 11);
  const auto b = multiplier_draws(st.sample, st.family, st.surface, 300, 11);
  CHECK(a.sup_stats == b.sup_stats);
  for (double v : a.sup_stats) CHECK(v >= 0.0);

  const char* old = std::getenv("UCBAND_THREADS");
  const std::string saved = old ? old : "";
  setenv("UCBAND_THREADS", "1", 1);
  const auto serial = multiplier_draws(st.sample, st.family, st.surface, 300, 11);
  setenv("UCBAND_THREADS", "3", 1);
  const auto three = multiplier_draws(st.sample, st.family, st.surface, 300, 11);
  if (old) setenv("UCBAND_THREADS", saved.c_str(), 1);
  else unsetenv("UCBAND_THREADS");
  CHECK(serial.sup_stats == a.sup_stats);
  CHECK(three.sup_stats == a.sup_stats);

  const auto other = multiplier_draws(st.sample, st.family, st.surface, 300, 12);
  CHECK(other.sup_stats != a.sup_stats);
}

TEST_CASE("quantiles are monotone in alpha under shared draws") {
  const Setup st = make_setup(400, 20, {2.0, 3.0});
  const auto draws = multiplier_draws(st.sample, st.family, st.surface, 1000, 3);
  double previous = std::numeric_limits<double>::infinity();
  for (double alpha : {0.001, 0.01, 0.05, 0.1, 0.2, 0.5, 0.9, 0.999}) {
    const auto q = quantile_from_draws(draws, alpha);
    CHECK(q.value <= previous);
    previous = q.value;
    std::vector<double> sorted = draws.sup_stats;
    std::sort(sorted.begin(), sorted.end());
    CHECK(q.value == sorted[q.order_index - 1]);
  }
  CHECK(quantile_from_draws(draws, 0.999).value <= quantile_from_draws(draws, 0.001).value);
}

TEST_CASE("bootstrap parameter errors") {
  const Setup st = make_setup(100, 8, {2.0});
  CHECK_THROWS_AS(bootstrap_quantile(st.sample, st.family, st.surface, 0.05, 99, 1),
                  ParameterError);
  CHECK_THROWS_AS(bootstrap_quantile(st.sample, st.family, st.surface, 1.5, 100, 1),
                  ParameterError);
  CHECK_THROWS_AS(multiplier_draws(st.sample, st.family, st.surface, 100, 1, 0.0),
                  ParameterError);
}

TEST_CASE("ten-cell bootstrap quantile matches the Gaussian oracle") {
  const Setup st = make_setup(500, 5, {2.0, 3.0});
  REQUIRE(st.surface.grid_size() * st.surface.level_count() == 10);
  const auto cov = CovarianceModel::from_surface(st.sample, st.family, st.surface);
  for (double alpha : {0.05, 0.1}) {
    const double boot = bootstrap_quantile(st.sample, st.family, st.surface, alpha, 50000, 21).value;
    const double oracle = oracle_max_gaussian_quantile(cov, alpha, 50000, 22);
    CHECK(std::abs(boot - oracle) <= 0.05);
  }
}
