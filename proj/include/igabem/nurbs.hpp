#ifndef IGABEM_NURBS_HPP
#define IGABEM_NURBS_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "igabem/geometry.hpp"

namespace igabem {

inline constexpr int kMaxDegree = 10;
inline constexpr int kMaxDerivOrder = 4;

// Clamped (open) knot vector: the first and last knot repeat degree+1 times.
class KnotVector {
 public:
  KnotVector(int degree, std::vector<double> knots);

  int degree() const { return degree_; }
  // Number of basis functions n = (#knots) - degree - 1.
  int basis_count() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
  const std::vector<double>& knots() const { return knots_; }
  double domain_begin() const { return knots_[degree_]; }
  double domain_end() const { return knots_[knots_.size() - degree_ - 1]; }

  // Index i with knot[i] <= xi < knot[i+1]; the right domain end maps to the
  // last span of positive length. Throws domain_error outside the domain.
  int find_span(double xi) const;

  // True if any interior knot repeats (curve only C^0 there).
  bool has_interior_multiplicity() const;

  int span_count() const;

 private:
  int degree_;
  std::vector<double> knots_;
};

// Nonzero basis values at a parameter: functions first..first+count-1.
struct BasisSpan {
  int span = 0;
  int first = 0;
  int count = 0;
  std::array<double, kMaxDegree + 1> value{};
};

// d[j][l] is the j-th derivative of the l-th active function. Columns above
// the degree are zero for B-splines; `truncated` flags that case.
struct BasisDerivs {
  int span = 0;
  int first = 0;
  int count = 0;
  int order = 0;
  bool truncated = false;
  std::array<std::array<double, kMaxDegree + 1>, kMaxDerivOrder + 1> d{};
};

BasisSpan bspline_basis(const KnotVector& kv, double xi);
BasisDerivs bspline_basis_derivs(const KnotVector& kv, double xi, int order);

struct LocalFrame;
// Frame from a point and its first two parametric derivatives; throws
// geometry_error when |d1| degenerates relative to the length scale.
LocalFrame make_local_frame(Vec2 point, Vec2 d1, Vec2 d2, double length_scale);

// Curve point, parametric derivatives, and the local (tangent, normal) frame.
// normal_angle = tangent_angle - pi/2, so normal = (sin a, -cos a) and the
// signed curvature is d(tangent_angle)/ds.
struct LocalFrame {
  Vec2 point;
  Vec2 d1;
  Vec2 d2;
  double jacobian = 0.0;       // |d1|, length per unit parameter
  double tangent_angle = 0.0;  // alpha
  double normal_angle = 0.0;   // beta = alpha - pi/2
  double curvature = 0.0;      // 1/R = (x'y'' - y'x'')/|d1|^3

  Vec2 tangent() const { return {std::cos(tangent_angle), std::sin(tangent_angle)}; }
  Vec2 normal() const { return {std::sin(tangent_angle), -std::cos(tangent_angle)}; }
};

class NurbsCurve {
 public:
  NurbsCurve(KnotVector kv, std::vector<Vec2> control_points, std::vector<double> weights);

  const KnotVector& knot_vector() const { return kv_; }
  int degree() const { return kv_.degree(); }
  int control_count() const { return static_cast<int>(points_.size()); }
  const std::vector<Vec2>& control_points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  // Rational basis values and derivatives up to `order` (binomial recursion on
  // the weighted B-spline derivatives). Exact also for order > degree.
  BasisDerivs basis_derivs(double xi, int order) const;

  struct Jet {
    Vec2 p;
    Vec2 d1;
    Vec2 d2;
  };
  Jet eval(double xi) const;
  Vec2 point(double xi) const;

  // Throws geometry_error when the parameterization degenerates (J1 ~ 0).
  LocalFrame frame(double xi) const;

  // Arc length s(xi) from the first tip; cached per element at construction.
  double arc_length(double xi) const;
  double total_length() const { return cumulative_length_.back(); }
  // Characteristic coordinate magnitude, used for tolerance scaling.
  double length_scale() const { return length_scale_; }

  // Geometry-preserving single knot insertion / batch refinement.
  NurbsCurve inserted(double xi) const;
  NurbsCurve refined(const std::vector<double>& new_knots) const;
  NurbsCurve reversed() const;

 private:
  KnotVector kv_;
  std::vector<Vec2> points_;
  std::vector<double> weights_;
  std::vector<double> element_begin_;      // distinct span starts (+ final end)
  std::vector<double> cumulative_length_;  // arc length at element boundaries
  double length_scale_ = 1.0;
};

// Greville abscissae: averages of degree consecutive interior knots; one per
// basis function, first/last coincide with the domain ends.
std::vector<double> greville_abscissae(const KnotVector& kv);

struct ElementMesh {
  struct Element {
    double begin = 0.0;
    double end = 0.0;
    int span = 0;  // knot span index of [begin, end)
  };

  int degree = 0;
  std::vector<Element> elements;
  std::vector<double> collocation;  // Greville points

  int element_count() const { return static_cast<int>(elements.size()); }
  // Global index of the l-th active basis function on element e, l in [0, degree].
  int conn(int e, int l) const { return elements[e].span - degree + l; }
  // Element whose closed interval contains xi (ties at interior breaks go right).
  int element_of(double xi) const;
};

ElementMesh make_mesh(const NurbsCurve& curve);

// Plain-text curve files: `degree p`, `knots ...`, one `cp x y w` per control
// point; '#' starts a comment.
NurbsCurve read_curve(std::istream& in);
NurbsCurve load_curve_file(const std::string& path);
void write_curve(std::ostream& out, const NurbsCurve& curve);

}  // namespace igabem

#endif
