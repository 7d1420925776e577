#ifndef IGABEM_PRESETS_HPP
#define IGABEM_PRESETS_HPP

#include <vector>

#include "igabem/nurbs.hpp"

namespace igabem {

struct MeshSpec {
  int elements = 50;
  int degree = 2;
  bool graded = true;
  double grading_ratio = 1.2;
};

// Interior breakpoints of [0, 1] for the requested element count; graded
// partitions shrink geometrically toward both ends.
std::vector<double> mesh_breakpoints(int elements, bool graded, double grading_ratio);

// Straight segment from tip_a to tip_b with exactly linear parameterization.
NurbsCurve segment_curve(Vec2 tip_a, Vec2 tip_b, const MeshSpec& mesh);

// Circular arc traversed from position angle angle_a to angle_b (radians,
// increasing = counterclockwise; for a centered arc these equal the normal
// angles at the tips). Exact rational quadratic; sweeps below pi are a single
// segment, sweeps in [pi, 2pi) fall back to a C^0 composite.
NurbsCurve circular_arc_curve(Vec2 center, double radius, double angle_a, double angle_b,
                              const MeshSpec& mesh);

// Elliptic arc (semi-axes ax, ay) over parametric angles [t_a, t_b]; the
// affine image of the circular construction, so the locus is exact.
NurbsCurve ellipse_arc_curve(Vec2 center, double ax, double ay, double t_a, double t_b,
                             const MeshSpec& mesh);

// Parametric half-angle t* such that the arc t in [t*, pi - t*] of the ellipse
// (ax cos t, ay sin t) has the requested length. Bisection; throws
// config_error when the target is unreachable.
double ellipse_angle_for_arc_length(double ax, double ay, double target_length);

// Single-span (Bezier) degree elevation, geometry preserving.
NurbsCurve elevate_bezier(const NurbsCurve& curve, int target_degree);

}  // namespace igabem

#endif
