#ifndef IGABEM_TESTS_HELPERS_HPP
#define IGABEM_TESTS_HELPERS_HPP

#include <cmath>

#include "igabem/nurbs.hpp"

namespace igabem::testing {

// Unit quarter circle from (1,0) to (0,1) as an exact rational quadratic.
inline NurbsCurve quarter_circle(double radius = 1.0) {
  const double w = std::sqrt(2.0) / 2.0;
  return NurbsCurve(KnotVector(2, {0, 0, 0, 1, 1, 1}),
                    {{radius, 0.0}, {radius, radius}, {0.0, radius}}, {1.0, w, 1.0});
}

inline NurbsCurve two_span_quadratic() {
  return NurbsCurve(KnotVector(2, {0, 0, 0, 0.5, 1, 1, 1}),
                    {{0.0, 0.0}, {1.0, 0.5}, {2.0, -0.5}, {3.0, 0.0}}, {1.0, 1.0, 1.0, 1.0});
}

}  // namespace igabem::testing

#endif
