#ifndef IGABEM_SINGULAR_HPP
#define IGABEM_SINGULAR_HPP

#include <cmath>
#include <utility>

#include "igabem/errors.hpp"
#include "igabem/quadrature.hpp"

namespace igabem {

/* Cauchy-singular element integrals.

   An element [a, b] containing the source parameter xi_c is split as

     [a, xi_c - delta) u [xi_c - delta, xi_c + delta] u (xi_c + delta, b],

   delta = delta_fraction * min(xi_c - a, b - xi_c). The outer pieces are
   regular and integrated by Gauss with bisection refinement toward xi_c. On
   the symmetric piece the integrand is f(xi) = h(xi)/(xi - xi_c) with h
   smooth, and subtraction of the singularity gives

     int f = int [f(xi) - h(xi_c)/(xi - xi_c)] dxi  +  C.P.V. int h(xi_c)/(xi - xi_c) dxi,

   where the principal value of the second term vanishes on the symmetric
   interval and the first term is smooth. The caller supplies
   h_limit = h(xi_c) = lim (xi - xi_c) f(xi). The regularized part is
   integrated as two Gauss panels meeting at xi_c, so no node ever lands on
   the removable point. */

struct SingularPolicy {
  double delta_fraction = 1.0;
  int gauss_order_singular = 32;
};

template <class F>
double integrate_regular(F&& f, double a, double b, const QuadratureRule& rule) {
  const double v = integrate_interval(f, a, b, rule);
  if (!std::isfinite(v)) throw assembly_error("integrate_regular: non-finite integrand sample");
  return v;
}

// Gauss with `levels` rounds of bisection, always refining the half closer to
// near_xi. Used when the source point sits just outside the element.
template <class F>
double integrate_toward(F&& f, double a, double b, double near_xi, const QuadratureRule& rule,
                        int levels) {
  double acc = 0.0;
  double lo = a, hi = b;
  const bool near_left = std::abs(near_xi - a) <= std::abs(b - near_xi);
  for (int lvl = 0; lvl < levels; ++lvl) {
    const double mid = 0.5 * (lo + hi);
    if (near_left) {
      acc += integrate_interval(f, mid, hi, rule);
      hi = mid;
    } else {
      acc += integrate_interval(f, lo, mid, rule);
      lo = mid;
    }
  }
  acc += integrate_interval(f, lo, hi, rule);
  if (!std::isfinite(acc)) throw assembly_error("integrate_toward: non-finite integrand sample");
  return acc;
}

template <class F>
double integrate_singular(F&& f, double a, double b, double xi_c, const SingularPolicy& policy,
                          double h_limit, const QuadratureRule& regular_rule) {
  if (!(xi_c > a && xi_c < b)) {
    throw assembly_error("integrate_singular: source parameter not inside the interval");
  }
  if (!(policy.delta_fraction > 0.0 && policy.delta_fraction <= 1.0)) {
    throw assembly_error("integrate_singular: delta_fraction must be in (0, 1]");
  }
  const double delta = policy.delta_fraction * std::min(xi_c - a, b - xi_c);

  double acc = 0.0;
  if (xi_c - delta > a) acc += integrate_toward(f, a, xi_c - delta, xi_c, regular_rule, 3);
  if (xi_c + delta < b) acc += integrate_toward(f, xi_c + delta, b, xi_c, regular_rule, 3);

  const auto regularized = [&](double xi) { return f(xi) - h_limit / (xi - xi_c); };
  const QuadratureRule panel = gauss_legendre(policy.gauss_order_singular);
  acc += integrate_interval(regularized, xi_c - delta, xi_c, panel);
  acc += integrate_interval(regularized, xi_c, xi_c + delta, panel);
  if (!std::isfinite(acc)) throw assembly_error("integrate_singular: non-finite regularized integrand");
  return acc;
}

}  // namespace igabem

#endif
