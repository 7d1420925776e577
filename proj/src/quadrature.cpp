#include "igabem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace igabem {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  QuadratureRule rule;
  rule.points.resize(order);
  rule.weights.resize(order);

  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto [p, d] = legendre(order, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        dp = legendre(order, x).second;
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Guess starts near +1, so i counts from the right end.
    rule.points[order - 1 - i] = x;
    rule.weights[order - 1 - i] = w;
    rule.points[i] = -x;
    rule.weights[i] = w;
  }
  if (order % 2 == 1) rule.points[order / 2] = 0.0;
  return rule;
}

}  // namespace igabem
