#include "ucband/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ucband/error.hpp"

namespace ucband {

QuadratureRule gauss_legendre(int points) {
  if (points < 1) throw ParameterError("gauss_legendre: points must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[points - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[points - 1 - i] = w;
  }
  if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int points_per_panel, int panels) {
  if (panels < 1) throw ParameterError("integrate: panels must be >= 1");
  const QuadratureRule rule = gauss_legendre(points_per_panel);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    double part = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      part += rule.weights[k] * f(mid + 0.5 * width * rule.nodes[k]);
    total += 0.5 * width * part;
  }
  return total;
}

}  // namespace ucband
