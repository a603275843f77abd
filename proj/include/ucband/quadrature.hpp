#pragma once

#include <functional>
#include <vector>

namespace ucband {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `points` nodes on [-1, 1].
QuadratureRule gauss_legendre(int points);

/// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int points_per_panel = 16, int panels = 1);

}  // namespace ucband
