#ifndef IGABEM_FIELDS_HPP
#define IGABEM_FIELDS_HPP

#include <memory>
#include <vector>

#include "igabem/assembly.hpp"
#include "igabem/elastic.hpp"

namespace igabem {

// Solved surface state: control coefficients of sigma^S (d) and omega^S (q)
// over the curve's basis.
struct SurfaceSolution {
  std::shared_ptr<const Problem> problem;
  std::vector<double> d;
  std::vector<double> q;
  SolveDiagnostics diagnostics;
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;

  const NurbsCurve& curve() const { return problem->curve; }
};

// Full pipeline: validation, assembly, tip conditions, dense solve, and the
// tip-value post-condition check.
SurfaceSolution solve_problem(Problem problem);

struct SurfaceFieldSample {
  double s_tilde = 0.0;  // normalized arc length in [0, 1]
  double xi = 0.0;
  Vec2 point;
  double sigma_s = 0.0;
  double omega_s = 0.0;
  double dsigma_ds = 0.0;
  double domega_ds = 0.0;
  double eps_s = 0.0;    // recovered surface strain
  double jump_l = 0.0;
  double jump_n = 0.0;
};
SurfaceFieldSample surface_fields(const SurfaceSolution& sol, double xi);

struct FieldSample {
  Vec2 point;
  Vec2 u;
  Mat2 strain;
  Mat2 stress;
  double s33 = 0.0;
  double von_mises = 0.0;
  double relative_von_mises = 0.0;
};

// Plane-strain Von Mises measure including the out-of-plane stress.
double von_mises(const Mat2& sigma, double s33);
// Normalized against the remote state alone; throws domain_error when the
// remote Von Mises vanishes.
double relative_von_mises(const Mat2& sigma, double s33, const FarFieldLoad& load,
                          double poisson);

/* Off-surface evaluation of the single-layer representation. The traction
   jump density is frozen onto per-element Gauss nodes once; each field point
   then costs one kernel sweep. Points closer to the surface than
   0.01 * (local element length) are refused; points within one element length
   get bisection refinement of the nearby elements. */
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const SurfaceSolution& sol, int quadrature_order = 64);

  Vec2 displacement(Vec2 x) const;
  FieldSample sample(Vec2 x) const;

  // Distance to the surface (polyline estimate) and the closest element.
  double distance_to_surface(Vec2 x, int* element = nullptr) const;
  double near_threshold(int element) const;

  const SurfaceSolution& solution() const { return *sol_; }

 private:
  struct Node {
    Vec2 y;
    Vec2 weighted_jump;  // Cartesian traction jump * J1 * gauss weight
  };
  Vec2 jump_at(double xi) const;
  void check_distance(Vec2 x, double* dist_out, int* elem_out) const;
  void layer_terms(Vec2 x, Vec2* u, Mat2* grad) const;

  const SurfaceSolution* sol_;
  QuadratureRule rule_;
  std::vector<std::vector<Node>> element_nodes_;
  std::vector<double> element_length_;  // physical lengths
  std::vector<std::vector<Vec2>> element_polyline_;
  std::vector<std::vector<double>> element_polyline_xi_;
};

// Defect of the two continuous equations at an off-collocation parameter,
// normalized by the field magnitudes.
struct BieResidual {
  double sigma = 0.0;
  double omega = 0.0;
};

class ResidualEvaluator {
 public:
  explicit ResidualEvaluator(const SurfaceSolution& sol);
  BieResidual at(double xi) const;

 private:
  const SurfaceSolution* sol_;
  BieOperator op_;
  double sigma_scale_ = 1.0;
  double omega_scale_ = 1.0;
};

}  // namespace igabem

#endif
