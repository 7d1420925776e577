#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "igabem/quadrature.hpp"

using namespace igabem;

TEST_CASE("weights sum to the interval length") {
  for (int order : {1, 2, 3, 7, 16, 64, 200, 256}) {
    const QuadratureRule rule = gauss_legendre(order);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("rule is exactly symmetric") {
  for (int order : {5, 16, 33, 200}) {
    const QuadratureRule rule = gauss_legendre(order);
    for (int i = 0; i < order; ++i) {
      CHECK(rule.points[i] == -rule.points[order - 1 - i]);
      CHECK(rule.weights[i] == rule.weights[order - 1 - i]);
    }
  }
}

TEST_CASE("polynomial exactness up to degree 2n-1") {
  for (int order : {2, 3, 5, 8}) {
    const QuadratureRule rule = gauss_legendre(order);
    for (int deg = 0; deg <= 2 * order - 1; ++deg) {
      const double got = integrate_interval([deg](double x) { return std::pow(x, deg); },
                                            -1.0, 1.0, rule);
      const double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
      CHECK(got == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("two-point rule integrates a cubic on a shifted interval") {
  const QuadratureRule rule = gauss_legendre(2);
  const double got = integrate_interval([](double x) { return x * x; }, 0.0, 1.0, rule);
  CHECK(got == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const double one = integrate_interval([](double) { return 1.0; }, 0.0, 1.0, rule);
  CHECK(one == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("high order nodes are accurate") {
  // Compare a transcendental integral against the analytic value.
  const QuadratureRule rule = gauss_legendre(200);
  const double got = integrate_interval([](double x) { return std::exp(x); }, -1.0, 1.0, rule);
  CHECK(got == doctest::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-15));
}
