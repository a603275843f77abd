#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "ucband/error.hpp"
#include "ucband/kernels.hpp"
#include "ucband/quadrature.hpp"

using namespace ucband;

namespace {

double k1(const KernelFamily& f, double l, double y, double x) {
  const std::array<double, 1> a{y}, b{x};
  return f.eval(l, a, b);
}

}  // namespace

TEST_CASE("haar kernel: same dyadic cell and disjoint cells") {
  const auto haar = KernelFamily::from_name("haar", 1);
  CHECK(k1(haar, 0, 0.25, 0.75) == 1.0);
  CHECK(k1(haar, 1, 0.25, 0.75) == 0.0);
  CHECK(k1(haar, 1, 0.25, 0.30) == 2.0);
  CHECK(k1(haar, 3, 0.26, 0.27) == 8.0);
}

TEST_CASE("fourier kernel with a single term is the constant phi_1^2") {
  // phi_1 = 1/sqrt(2) keeps the basis orthonormal on [-1, 1], so the one-term
  // kernel is 1/2 everywhere.
  const auto fourier = KernelFamily::from_name("fourier", 1);
  for (double y : {-1.0, -0.3, 0.0, 0.9})
    for (double x : {-0.7, 0.2, 1.0}) CHECK(k1(fourier, 0.0, y, x) == doctest::Approx(0.5));
  CHECK(k1(fourier, 0.5, 0.1, 0.4) == doctest::Approx(0.5));  // floor(2^0.5) = 1
}

TEST_CASE("epanechnikov kernel at l = 0 on the diagonal") {
  const auto epa = KernelFamily::from_name("epanechnikov", 1);
  CHECK(k1(epa, 0, 0.3, 0.3) == 0.75);
  CHECK(k1(epa, 0, -0.5, 0.5) == 0.0);
  CHECK(k1(epa, 1, 0.0, 0.25) == doctest::Approx(2 * 0.75 * (1 - 0.25)));
}

TEST_CASE("basis_eval values") {
  CHECK(basis_eval_1d(SeriesBasis::fourier_cosine, 1, 0.3) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(basis_eval_1d(SeriesBasis::fourier_cosine, 2, 0.3) ==
        doctest::Approx(std::cos(std::numbers::pi * 0.3)));
  CHECK(basis_eval_1d(SeriesBasis::fourier_cosine, 4, -0.2) ==
        doctest::Approx(std::cos(3 * std::numbers::pi * -0.2)));
  CHECK(basis_eval_1d(SeriesBasis::legendre, 2, 1.0) == doctest::Approx(std::sqrt(1.5)));
  CHECK(basis_eval_1d(SeriesBasis::legendre, 2, 1.0) == doctest::Approx(1.224745).epsilon(1e-6));
  CHECK(basis_eval_1d(SeriesBasis::legendre, 3, 0.0) == doctest::Approx(-std::sqrt(5.0 / 8.0)));
  CHECK(basis_eval_1d(SeriesBasis::legendre, 3, 0.0) == doctest::Approx(-0.790569).epsilon(1e-6));

  SeriesSpec spec;
  spec.basis = SeriesBasis::legendre;
  const std::array<double, 1> x{0.5};
  CHECK(basis_eval(spec, 2, x) == doctest::Approx(std::sqrt(1.5) * 0.5));
}

TEST_CASE("basis_eval errors") {
  CHECK_THROWS_AS(basis_eval_1d(SeriesBasis::legendre, 0, 0.0), ParameterError);
  CHECK_THROWS_AS(basis_eval_1d(SeriesBasis::legendre, kMaxBasisIndex + 1, 0.0), ParameterError);
  CHECK_THROWS_AS(basis_eval_1d(SeriesBasis::fourier_cosine, 2, 1.5), DomainError);
}

TEST_CASE("eval_kernel errors") {
  const auto haar = KernelFamily::from_name("haar", 1);
  CHECK_THROWS_AS(k1(haar, 1.5, 0.1, 0.2), ParameterError);
  CHECK_THROWS_AS(k1(haar, -1, 0.1, 0.2), ParameterError);
  const auto leg = KernelFamily::from_name("legendre", 1);
  CHECK_THROWS_AS(k1(leg, 2, 1.2, 0.0), DomainError);
  CHECK_THROWS_AS(k1(leg, 2, 0.0, -1.01), DomainError);
  CHECK_THROWS_AS(KernelFamily::from_name("gaussian", 1), ParameterError);
}

TEST_CASE("verify_moments") {
  SUBCASE("epanechnikov order 2") {
    const auto r = verify_moments({ConvolutionBase::epanechnikov, 2}, 1024);
    REQUIRE(r.moments.size() == 2);
    CHECK(r.pass);
    CHECK(r.deviations[0] < 1e-10);
    CHECK(r.deviations[1] < 1e-10);
  }
  SUBCASE("poly4 order 4") {
    const auto r = verify_moments({ConvolutionBase::poly4, 4}, 1024);
    REQUIRE(r.moments.size() == 4);
    CHECK(r.pass);
    for (double dev : r.deviations) CHECK(dev < 1e-8);
  }
  SUBCASE("epanechnikov declared order 4 fails on m_2 = 0.2") {
    const auto r = verify_moments({ConvolutionBase::epanechnikov, 4}, 1024);
    CHECK_FALSE(r.pass);
    CHECK(r.moments[2] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.deviations[3] < 1e-10);
  }
  CHECK_THROWS_AS(verify_moments({ConvolutionBase::epanechnikov, 2}, 32), ParameterError);
}

TEST_CASE("kernel symmetry is exact for every family") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"epanechnikov", "poly4", "haar", "daub4", "fourier", "legendre"}) {
    const auto fam = KernelFamily::from_name(name, 1);
    for (double l : {0.0, 1.0, 2.0, 3.0, 5.0}) {
      for (int i = 0; i < 50; ++i) {
        const double y = u(rng), x = u(rng);
        CHECK(k1(fam, l, y, x) == k1(fam, l, x, y));
      }
    }
  }
  const auto epa2 = KernelFamily::from_name("epanechnikov", 2);
  const std::array<double, 2> a{0.41, 0.52}, b{0.47, 0.35};
  CHECK(epa2.eval(2.5, a, b) == epa2.eval(2.5, b, a));
}

TEST_CASE("convolution scaling identity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const char* name : {"epanechnikov", "poly4"}) {
    for (int d : {1, 2}) {
      const auto fam = KernelFamily::from_name(name, d);
      for (double l : {0.5, 1.0, 2.25, 3.0}) {
        const double s = std::exp2(l);
        for (int i = 0; i < 40; ++i) {
          std::vector<double> y(d), x(d), ys(d), xs(d);
          for (int m = 0; m < d; ++m) {
            y[m] = 0.3 * u(rng);
            x[m] = y[m] + u(rng) / s;
            ys[m] = s * y[m];
            xs[m] = s * x[m];
          }
          const double lhs = fam.eval(l, y, x);
          const double rhs = std::pow(s, d) * fam.eval(0.0, ys, xs);
          CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        }
      }
    }
  }
}

TEST_CASE("haar reproducing sum integrates to one") {
  const auto haar = KernelFamily::from_name("haar", 1);
  for (int l : {0, 1, 3, 5}) {
    for (double x : {0.1, 0.37, 0.5, 0.93}) {
      const int cells = 1 << l;
      const double integral =
          integrate([&](double y) { return k1(haar, l, y, x); }, 0.0, 1.0, 8, cells);
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("daub4 scaling function and reproducing sum") {
  const ScalingFunction phi({WaveletName::daub4, 12});
  CHECK(phi.support_length() == 3);
  CHECK(phi(1.0) == doctest::Approx((1 + std::sqrt(3.0)) / 2).epsilon(1e-12));
  CHECK(phi(2.0) == doctest::Approx((1 - std::sqrt(3.0)) / 2).epsilon(1e-12));
  CHECK(phi(-0.1) == 0.0);
  CHECK(phi(3.1) == 0.0);
  for (double x : {0.13, 0.5, 0.77}) {
    double total = 0.0;
    for (int k = -3; k <= 3; ++k) total += phi(x + k);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(wavelet_orthonormality_error({WaveletName::haar, 12}) < 1e-14);
  CHECK(wavelet_orthonormality_error({WaveletName::daub4, 12}) < 1e-5);
  CHECK(wavelet_orthonormality_error({WaveletName::daub4, 16}) <
        wavelet_orthonormality_error({WaveletName::daub4, 10}));

  const auto db = KernelFamily::from_name("daub4", 1);
  for (double x : {0.3, 0.61}) {
    const double integral =
        integrate([&](double y) { return k1(db, 3, y, x); }, -1.0, 2.0, 16, 192);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("fourier kernel trace equals the term count") {
  const auto fourier = KernelFamily::from_name("fourier", 1);
  for (double l : {1.0, 2.0, 2.5, 3.0, 4.0}) {
    const double terms = std::floor(std::exp2(l));
    const double trace =
        integrate([&](double x) { return k1(fourier, l, x, x); }, -1.0, 1.0, 32, 8);
    CHECK(trace == doctest::Approx(terms).epsilon(1e-8));
  }
}

TEST_CASE("series orthonormality") {
  CHECK(series_orthonormality_error(SeriesBasis::legendre, 32, 128) < 1e-8);
  CHECK(series_orthonormality_error(SeriesBasis::fourier_cosine, 32, 128) < 1e-8);
}

TEST_CASE("series domain mapping keeps orthonormality") {
  // phi_j on [0, 2]: integral of phi_2^2 must still be 1.
  const double v = integrate(
      [](double x) {
        const double b = basis_eval_1d(SeriesBasis::legendre, 2, x, 0.0, 2.0);
        return b * b;
      },
      0.0, 2.0, 32, 1);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tensorization in d = 2") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"epanechnikov", "haar", "poly4"}) {
    const auto f1 = KernelFamily::from_name(name, 1);
    const auto f2 = KernelFamily::from_name(name, 2);
    for (double l : {1.0, 2.0, 3.0}) {
      for (int i = 0; i < 50; ++i) {
        const std::array<double, 2> y{u(rng), u(rng)}, x{u(rng), u(rng)};
        const double prod = k1(f1, l, y[0], x[0]) * k1(f1, l, y[1], x[1]);
        CHECK(f2.eval(l, y, x) == prod);
      }
    }
  }
  // Series with 2^l integer: graded order fills the full box, so the kernel
  // is the product of univariate kernels up to rounding.
  const auto s1 = KernelFamily::from_name("legendre", 1);
  const auto s2 = KernelFamily::from_name("legendre", 2);
  const std::array<double, 2> y{0.2, -0.4}, x{0.7, 0.1};
  CHECK(s2.eval(2.0, y, x) ==
        doctest::Approx(k1(s1, 2.0, y[0], x[0]) * k1(s1, 2.0, y[1], x[1])).epsilon(1e-12));
}

TEST_CASE("graded multi-index order") {
  const auto idx = graded_multi_indices(2, 4);
  REQUIRE(idx.size() == 4);
  CHECK(idx[0] == std::vector<int>{1, 1});
  CHECK(idx[1] == std::vector<int>{1, 2});
  CHECK(idx[2] == std::vector<int>{2, 1});
  CHECK(idx[3] == std::vector<int>{2, 2});
}

TEST_CASE("eval_column matches pointwise evaluation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts(60);
  for (double& p : pts) p = u(rng);
  for (const char* name : {"epanechnikov", "daub4", "fourier"}) {
    const auto fam = KernelFamily::from_name(name, 1);
    std::vector<double> out(pts.size());
    const std::array<double, 1> x{0.45};
    fam.eval_column(3.0, pts, x, out);
    for (std::size_t i = 0; i < pts.size(); ++i)
      CHECK(out[i] == doctest::Approx(k1(fam, 3.0, pts[i], 0.45)).epsilon(1e-13));
  }
}

TEST_CASE("kernel evaluation is finite for extreme inputs") {
  for (const char* name : {"epanechnikov", "poly4", "haar", "daub4"}) {
    const auto fam = KernelFamily::from_name(name, 1);
    CHECK(std::isfinite(k1(fam, 4, 1e6, -1e6)));
    CHECK(std::isfinite(k1(fam, 4, -3.3, -3.3)));
  }
}
