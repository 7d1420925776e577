#ifndef IGABEM_TESTS_ORACLES_HPP
#define IGABEM_TESTS_ORACLES_HPP

// Test-only reference computations, independent of the library's integration
// paths: brute-force principal values, interval-halving quadrature, and
// central finite differences.

#include <cmath>
#include <functional>
#include <random>

#include "igabem/quadrature.hpp"

namespace igabem::testing {

// Composite Gauss with geometric panels shrinking toward `edge`, so steep
// 1/(xi - c) tails are resolved.
inline double integrate_refined_toward(const std::function<double(double)>& f, double a, double b,
                                       bool toward_left, int panels = 40) {
  const QuadratureRule rule = gauss_legendre(16);
  double acc = 0.0;
  double lo = a, hi = b;
  for (int k = 0; k < panels; ++k) {
    const double mid = (k + 1 == panels) ? (toward_left ? lo : hi) : 0.5 * (lo + hi);
    if (toward_left) {
      acc += integrate_interval(f, mid, hi, rule);
      hi = mid;
    } else {
      acc += integrate_interval(f, lo, mid, rule);
      lo = mid;
    }
    if (k + 1 == panels) break;
  }
  return acc;
}

// Principal value of int_a^b f over an interval containing c, by symmetric
// excision at epsilon and Richardson extrapolation of the O(eps) remainder.
inline double cpv_excision_oracle(const std::function<double(double)>& f, double a, double b,
                                  double c, double eps = 1e-4) {
  const auto excised = [&](double e) {
    return integrate_refined_toward(f, a, c - e, false) +
           integrate_refined_toward(f, c + e, b, true);
  };
  const double coarse = excised(eps);
  const double fine = excised(eps / 10.0);
  return (10.0 * fine - coarse) / 9.0;  // kills the linear-in-eps term
}

// Adaptive interval halving against a fixed rule, to a requested tolerance.
inline double adaptive_quadrature_oracle(const std::function<double(double)>& f, double a,
                                         double b, double tol = 1e-12, int depth = 0) {
  static const QuadratureRule rule = gauss_legendre(12);
  const double whole = integrate_interval(f, a, b, rule);
  const double mid = 0.5 * (a + b);
  const double split = integrate_interval(f, a, mid, rule) + integrate_interval(f, mid, b, rule);
  if (std::abs(whole - split) < tol * (1.0 + std::abs(split)) || depth > 30) return split;
  return adaptive_quadrature_oracle(f, a, mid, tol / 2, depth + 1) +
         adaptive_quadrature_oracle(f, mid, b, tol / 2, depth + 1);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Smooth random test density: low-order polynomial times a gentle oscillation.
class RandomSmoothDensity {
 public:
  explicit RandomSmoothDensity(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& c : poly_) c = u(rng);
    freq_ = 1.0 + std::abs(u(rng));
    phase_ = u(rng);
  }
  double operator()(double x) const {
    const double p = poly_[0] + x * (poly_[1] + x * (poly_[2] + x * poly_[3]));
    return p + 0.5 * std::cos(freq_ * x + phase_);
  }

 private:
  double poly_[4] = {};
  double freq_ = 1.0;
  double phase_ = 0.0;
};

}  // namespace igabem::testing

#endif
