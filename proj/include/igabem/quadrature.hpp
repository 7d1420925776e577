#ifndef IGABEM_QUADRATURE_HPP
#define IGABEM_QUADRATURE_HPP

#include <utility>
#include <vector>

namespace igabem {

// Gauss-Legendre rule on the parent interval [-1, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  int order() const { return static_cast<int>(points.size()); }
};

// Nodes and weights by Newton iteration on the Legendre recurrence. Nodes are
// mirrored about 0 so the rule is exactly symmetric.
QuadratureRule gauss_legendre(int order);

// Integrate f over [a, b] with the given rule (constant interval Jacobian).
template <class F>
double integrate_interval(F&& f, double a, double b, const QuadratureRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < rule.order(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.points[i]);
  }
  return acc * half;
}

}  // namespace igabem

#endif
