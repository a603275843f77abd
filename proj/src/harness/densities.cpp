#include "ucband/harness/densities.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "ucband/error.hpp"

namespace ucband::harness {

std::vector<double> TestDensity::sample(std::size_t n, Rng& rng) const {
  std::vector<double> out(n * dimension);
  for (std::size_t i = 0; i < n; ++i) draw(rng, {out.data() + i * dimension, dimension});
  return out;
}

namespace {

constexpr double kPi = std::numbers::pi;

TestDensity unit_box(std::string id, std::size_t d, double holder_t) {
  TestDensity t;
  t.id = std::move(id);
  t.dimension = d;
  t.holder_t = holder_t;
  t.support_lower.assign(d, 0.0);
  t.support_upper.assign(d, 1.0);
  t.band_lower.assign(d, 0.25);
  t.band_upper.assign(d, 0.75);
  return t;
}

bool in_unit_box(std::span<const double> x) {
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0)) return false;
  return true;
}

// Rejection sampling of a 1-d pdf on [0, 1] under a constant envelope.
void rejection_1d(Rng& rng, const std::function<double(double)>& f, double envelope,
                  std::span<double> out) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double x = u(rng);
    if (u(rng) * envelope <= f(x)) {
      out[0] = x;
      return;
    }
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

TestDensity uniform01(std::size_t d) {
  TestDensity t = unit_box("uniform01", d, std::numeric_limits<double>::infinity());
  t.pdf = [](std::span<const double> x) { return in_unit_box(x) ? 1.0 : 0.0; };
  if (d == 1) t.cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  t.draw = [](Rng& rng, std::span<double> out) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : out) v = u(rng);
  };
  return t;
}

// 1 + a cos(2 pi k x) on [0, 1].
TestDensity cosine_bump(std::size_t d) {
  if (d != 1) throw ParameterError("cosine-bump is one-dimensional");
  constexpr double a = 0.5;
  constexpr double k = 2.0;
  TestDensity t = unit_box("cosine-bump", 1, 2.0);
  auto f = [](double x) { return 1.0 + a * std::cos(2.0 * kPi * k * x); };
  t.pdf = [f](std::span<const double> x) { return in_unit_box(x) ? f(x[0]) : 0.0; };
  t.cdf = [](double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x + a * std::sin(2.0 * kPi * k * x) / (2.0 * kPi * k);
  };
  t.draw = [f](Rng& rng, std::span<double> out) { rejection_1d(rng, f, 1.0 + a, out); };
  return t;
}

// 1 + a tri(m x), tri(y) = 4 |frac(y) - 1/2| - 1: piecewise linear with kinks at j / (2m).
TestDensity sawtooth(std::size_t d, int teeth) {
  if (d != 1) throw ParameterError("sawtooth is one-dimensional");
  if (teeth < 1) throw ParameterError("sawtooth needs at least one tooth");
  constexpr double a = 0.5;
  const double m = teeth;
  TestDensity t = unit_box("sawtooth-" + std::to_string(teeth), 1, 1.0);
  auto f = [m](double x) {
    const double y = m * x;
    return 1.0 + a * (4.0 * std::abs(y - std::floor(y) - 0.5) - 1.0);
  };
  t.pdf = [f](std::span<const double> x) { return in_unit_box(x) ? f(x[0]) : 0.0; };
  t.cdf = [m](double x) {
    x = std::clamp(x, 0.0, 1.0);
    const double y = m * x;
    const double r = y - std::floor(y);
    const double partial = r <= 0.5 ? r - 2.0 * r * r : 2.0 * r * r - 3.0 * r + 1.0;
    return x + a * partial / m;
  };
  t.draw = [f](Rng& rng, std::span<double> out) { rejection_1d(rng, f, 1.0 + a, out); };
  return t;
}

constexpr double kBimodalMu[2] = {0.3, 0.7};
constexpr double kBimodalSd = 0.1;

// Equal mixture of N(0.3, 0.1^2 I) and N(0.7, 0.1^2 I) truncated to [0, 1]^d.
TestDensity bimodal(std::size_t d) {
  constexpr auto& mu = kBimodalMu;
  constexpr double sd = kBimodalSd;
  if (d != 1 && d != 2) throw ParameterError("bimodal-gauss-trunc supports d = 1 or 2");
  TestDensity t = unit_box("bimodal-gauss-trunc", d, 2.0);
  t.band_lower.assign(d, 0.2);
  t.band_upper.assign(d, 0.8);

  double mass = 0.0;  // mixture mass inside the box
  for (double m : mu) {
    const double inside = normal_cdf((1.0 - m) / sd) - normal_cdf(-m / sd);
    mass += 0.5 * std::pow(inside, static_cast<double>(d));
  }
  t.pdf = [mass, d](std::span<const double> x) {
    constexpr auto& mu = kBimodalMu;
    if (!in_unit_box(x)) return 0.0;
    double total = 0.0;
    for (double m : mu) {
      double prod = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double z = (x[j] - m) / sd;
        prod *= std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * kPi));
      }
      total += 0.5 * prod;
    }
    return total / mass;
  };
  if (d == 1) {
    t.cdf = [mass](double x) {
      constexpr auto& mu = kBimodalMu;
      x = std::clamp(x, 0.0, 1.0);
      double total = 0.0;
      for (double m : mu) total += 0.5 * (normal_cdf((x - m) / sd) - normal_cdf(-m / sd));
      return total / mass;
    };
  }
  t.draw = [](Rng& rng, std::span<double> out) {
    constexpr auto& mu = kBimodalMu;
    std::normal_distribution<double> norm(0.0, sd);
    std::bernoulli_distribution coin(0.5);
    for (;;) {
      const double m = coin(rng) ? mu[1] : mu[0];
      bool inside = true;
      for (double& v : out) {
        v = m + norm(rng);
        inside = inside && v >= 0.0 && v <= 1.0;
      }
      if (inside) return;
    }
  };
  return t;
}

// 0.5 on [0, 1/3), 1.25 on [1/3, 1]; the jump is off every dyadic grid.
TestDensity step_third(std::size_t d) {
  if (d != 1) throw ParameterError("step-third is one-dimensional");
  constexpr double lo = 0.5, hi = 1.25, cut = 1.0 / 3.0;
  TestDensity t = unit_box("step-third", 1, 0.0);
  t.band_lower = {0.05};
  t.band_upper = {0.95};
  auto f = [](double x) { return x < cut ? lo : hi; };
  t.pdf = [f](std::span<const double> x) { return in_unit_box(x) ? f(x[0]) : 0.0; };
  t.cdf = [](double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x < cut ? lo * x : lo * cut + hi * (x - cut);
  };
  t.draw = [](Rng& rng, std::span<double> out) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double v = u(rng);
    out[0] = v < lo * cut ? v / lo : cut + (v - lo * cut) / hi;
  };
  return t;
}

}  // namespace

TestDensity make_density(std::string_view id, std::size_t dimension) {
  if (dimension < 1) throw ParameterError("density dimension must be >= 1");
  if (id == "uniform01") return uniform01(dimension);
  if (id == "cosine-bump") return cosine_bump(dimension);
  if (id == "sawtooth" || id == "sawtooth-m") return sawtooth(dimension, 4);
  if (id.starts_with("sawtooth-")) {
    int teeth = 0;
    const auto digits = id.substr(9);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), teeth);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw ParameterError("bad sawtooth id '" + std::string(id) + "'");
    return sawtooth(dimension, teeth);
  }
  if (id == "bimodal-gauss-trunc") return bimodal(dimension);
  if (id == "step-third") return step_third(dimension);
  throw ParameterError("unknown density '" + std::string(id) + "'");
}

std::vector<std::string> builtin_density_ids() {
  return {"uniform01", "cosine-bump", "sawtooth-4", "bimodal-gauss-trunc", "step-third"};
}

}  // namespace ucband::harness
