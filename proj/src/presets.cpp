#include "igabem/presets.hpp"

#include <algorithm>
#include <cmath>

#include "igabem/errors.hpp"
#include "igabem/quadrature.hpp"

namespace igabem {

std::vector<double> mesh_breakpoints(int elements, bool graded, double grading_ratio) {
  if (elements < 1) throw config_error("mesh: element count must be >= 1");
  if (!(grading_ratio >= 1.0)) throw config_error("mesh: grading ratio must be >= 1");

  std::vector<double> lengths(elements, 1.0);
  if (graded && grading_ratio > 1.0) {
    // Geometric growth from both tips toward the middle.
    for (int j = 0; j < elements; ++j) {
      const int rank = std::min(j, elements - 1 - j);
      lengths[j] = std::pow(grading_ratio, rank);
    }
  }
  double total = 0.0;
  for (double v : lengths) total += v;

  // Fill the left half and mirror it so the partition is symmetric to the
  // last bit; symmetric meshes keep the discrete system exactly symmetric.
  std::vector<double> breaks(elements - 1, 0.5);
  double acc = 0.0;
  for (int j = 0; 2 * (j + 1) < elements + 1; ++j) {
    acc += lengths[j];
    if (j < elements - 2 - j) {
      breaks[j] = acc / total;
      breaks[elements - 2 - j] = 1.0 - breaks[j];
    }
  }
  return breaks;
}

namespace {

NurbsCurve refine_to_mesh(NurbsCurve base, const MeshSpec& mesh) {
  if (mesh.degree > base.degree()) {
    base = elevate_bezier(base, mesh.degree);
  } else if (mesh.degree < base.degree()) {
    throw config_error("mesh: requested degree below the preset's exact degree");
  }
  return base.refined(mesh_breakpoints(mesh.elements, mesh.graded, mesh.grading_ratio));
}

// Arc of the unit circle over position angles [a, b], sweep < pi, as one
// rational quadratic Bezier.
void unit_arc_segment(double a, double b, std::vector<Vec2>& points,
                      std::vector<double>& weights) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double w = std::cos(half);
  points = {{std::cos(a), std::sin(a)},
            {std::cos(mid) / w, std::sin(mid) / w},
            {std::cos(b), std::sin(b)}};
  weights = {1.0, w, 1.0};
}

}  // namespace

NurbsCurve segment_curve(Vec2 tip_a, Vec2 tip_b, const MeshSpec& mesh) {
  if ((tip_b - tip_a).norm() == 0.0) throw config_error("segment: coincident tips");
  // Quadratic Bezier with the middle control point on the chord midpoint is
  // the exact linear parameterization.
  NurbsCurve base(KnotVector(2, {0, 0, 0, 1, 1, 1}),
                  {tip_a, (tip_a + tip_b) * 0.5, tip_b}, {1.0, 1.0, 1.0});
  return refine_to_mesh(std::move(base), mesh);
}

NurbsCurve ellipse_arc_curve(Vec2 center, double ax, double ay, double t_a, double t_b,
                             const MeshSpec& mesh) {
  if (!(ax > 0.0) || !(ay > 0.0)) throw config_error("ellipse arc: degenerate axes");
  const double sweep = t_b - t_a;
  if (!(sweep > 0.0)) throw config_error("ellipse arc: parameter range must increase");
  if (sweep >= 2.0 * M_PI) throw config_error("ellipse arc: sweep must be below 2 pi");

  const auto stretch = [&](Vec2 p) { return Vec2{center.x + ax * p.x, center.y + ay * p.y}; };

  if (sweep < M_PI * (1.0 - 1e-12)) {
    std::vector<Vec2> pts;
    std::vector<double> wts;
    unit_arc_segment(t_a, t_b, pts, wts);
    for (Vec2& p : pts) p = stretch(p);
    NurbsCurve base(KnotVector(2, {0, 0, 0, 1, 1, 1}), std::move(pts), std::move(wts));
    return refine_to_mesh(std::move(base), mesh);
  }

  // Wide sweep: composite of equal pieces joined with double knots. Exact
  // geometry but only C^0 in parameter; the solver rejects such meshes.
  const int pieces = static_cast<int>(std::ceil(sweep / (0.5 * M_PI)));
  std::vector<double> knots = {0, 0, 0};
  std::vector<Vec2> cps;
  std::vector<double> wts;
  for (int k = 0; k < pieces; ++k) {
    const double a = t_a + sweep * k / pieces;
    const double b = t_a + sweep * (k + 1) / pieces;
    std::vector<Vec2> pts;
    std::vector<double> w;
    unit_arc_segment(a, b, pts, w);
    for (Vec2& p : pts) p = stretch(p);
    if (k == 0) {
      cps = pts;
      wts = w;
    } else {
      cps.insert(cps.end(), pts.begin() + 1, pts.end());
      wts.insert(wts.end(), w.begin() + 1, w.end());
      knots.push_back(static_cast<double>(k) / pieces);
      knots.push_back(static_cast<double>(k) / pieces);
    }
  }
  knots.insert(knots.end(), {1, 1, 1});
  NurbsCurve base(KnotVector(2, std::move(knots)), std::move(cps), std::move(wts));
  if (mesh.degree != 2) throw config_error("wide arcs support degree 2 only");
  return base.refined(mesh_breakpoints(mesh.elements, mesh.graded, mesh.grading_ratio));
}

NurbsCurve circular_arc_curve(Vec2 center, double radius, double angle_a, double angle_b,
                              const MeshSpec& mesh) {
  if (!(radius > 0.0)) throw config_error("circular arc: radius must be > 0");
  return ellipse_arc_curve(center, radius, radius, angle_a, angle_b, mesh);
}

double ellipse_angle_for_arc_length(double ax, double ay, double target_length) {
  if (!(ax > 0.0) || !(ay > 0.0)) throw config_error("ellipse arc: degenerate axes");
  const QuadratureRule rule = gauss_legendre(64);
  const auto speed = [&](double t) {
    const double sx = ax * std::sin(t), sy = ay * std::cos(t);
    return std::sqrt(sx * sx + sy * sy);
  };
  const auto arc = [&](double t) {
    // length of t .. pi - t, split at the apex for accuracy
    return integrate_interval(speed, t, 0.5 * M_PI, rule) +
           integrate_interval(speed, 0.5 * M_PI, M_PI - t, rule);
  };
  if (!(target_length > 0.0) || target_length >= arc(1e-12)) {
    throw config_error("ellipse arc: unreachable target arc length");
  }
  double lo = 1e-12, hi = 0.5 * M_PI;  // arc() decreases from ~half perimeter to 0
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (arc(mid) > target_length) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

NurbsCurve elevate_bezier(const NurbsCurve& curve, int target_degree) {
  if (curve.knot_vector().span_count() != 1) {
    throw config_error("degree elevation implemented for single-span curves only");
  }
  if (target_degree > kMaxDegree) throw config_error("degree elevation: target degree too high");

  NurbsCurve result = curve;
  while (result.degree() < target_degree) {
    const int p = result.degree();
    const auto& pts = result.control_points();
    const auto& wts = result.weights();
    // One elevation round on homogeneous control points.
    std::vector<Vec2> q(p + 2);
    std::vector<double> qw(p + 2);
    q[0] = pts[0] * wts[0];
    qw[0] = wts[0];
    q[p + 1] = pts[p] * wts[p];
    qw[p + 1] = wts[p];
    for (int i = 1; i <= p; ++i) {
      const double f = static_cast<double>(i) / (p + 1);
      q[i] = pts[i - 1] * wts[i - 1] * f + pts[i] * wts[i] * (1.0 - f);
      qw[i] = wts[i - 1] * f + wts[i] * (1.0 - f);
    }
    for (int i = 0; i <= p + 1; ++i) q[i] = q[i] / qw[i];
    const double lo = result.knot_vector().domain_begin();
    const double hi = result.knot_vector().domain_end();
    std::vector<double> knots(2 * (p + 2));
    for (int i = 0; i < p + 2; ++i) {
      knots[i] = lo;
      knots[p + 2 + i] = hi;
    }
    result = NurbsCurve(KnotVector(p + 1, std::move(knots)), std::move(q), std::move(qw));
  }
  return result;
}

}  // namespace igabem
