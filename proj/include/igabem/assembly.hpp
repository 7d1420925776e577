#ifndef IGABEM_ASSEMBLY_HPP
#define IGABEM_ASSEMBLY_HPP

#include <vector>

#include "igabem/elastic.hpp"
#include "igabem/linear_solve.hpp"
#include "igabem/nurbs.hpp"
#include "igabem/quadrature.hpp"
#include "igabem/singular.hpp"

namespace igabem {

enum class Parallelism { kSerial, kOpenMP };

struct AssemblyOptions {
  int regular_order = 200;  // Gauss order per element away from the source point
  SingularPolicy singular{};
  int near_levels = 3;  // bisection rounds toward a source point just outside an element
  // Evaluate the density rotation and curvature factor with the source-point
  // frame instead of the integration-point frame (the printed parametric form;
  // differs on curved geometry, kept for comparison).
  bool literal_density_frame = false;
  Parallelism parallelism = Parallelism::kSerial;
};

// Geometry + material + load bundle the solver pipeline works on.
struct Problem {
  NurbsCurve curve;
  ElementMesh mesh;
  BulkMaterial bulk;
  SurfaceMaterial surface;
  FarFieldLoad load;
  AssemblyOptions options{};
};

// Solver entry requirements: degree >= 2, simple interior knots, positive
// Jacobian along the curve, admissible materials.
void validate_problem(const Problem& problem);

// Square system for the stacked coefficients X = (d_0..d_{n-1}, q_0..q_{n-1}).
struct LinearSystem {
  DenseMatrix matrix;
  std::vector<double> rhs;
  int field_count = 0;  // n
};

/* Row evaluator for the two coupled boundary integral equations.

   Each equation at a source parameter xi0 has the discrete form

     sum_j N_j(xi0) c_j  -  (operator term)(X)  =  load term,

   where the operator term integrates the angular kernels against the traction
   jump generated by the trial fields. Element integrals away from xi0 use
   cached Gauss data; the element(s) adjacent to xi0 are handled with the
   subtraction-of-singularity scheme of singular.hpp, with the Cauchy strength
   taken analytically from the local frame. */
class BieOperator {
 public:
  explicit BieOperator(const Problem& problem);

  struct Rows {
    std::vector<double> sigma;  // 2n coefficients of the sigma^S equation
    std::vector<double> omega;  // 2n coefficients of the omega^S equation
    double rhs_sigma = 0.0;
    double rhs_omega = 0.0;
  };
  Rows rows(double xi0) const;

  const Problem& problem() const { return *problem_; }

 private:
  struct PointEval {
    double xi = 0.0;
    LocalFrame frame;
    BasisDerivs basis;
  };
  struct SourceContext;  // per-row precomputed source data

  PointEval evaluate_point(double xi) const;
  void accumulate(const SourceContext& src, const PointEval& at, double weight, Rows& rows) const;
  void integrate_plain(const SourceContext& src, int element, Rows& rows) const;
  void integrate_span(const SourceContext& src, double a, double b, Rows& rows) const;
  void integrate_toward_source(const SourceContext& src, double a, double b, Rows& rows) const;

  const Problem* problem_;
  QuadratureRule regular_rule_;
  QuadratureRule singular_rule_;
  std::vector<std::vector<PointEval>> element_points_;  // cached regular Gauss data
  std::vector<std::vector<double>> element_node_weights_;  // includes the interval Jacobian
};

// BIE rows for every collocation point except those the tip conditions will
// replace (sigma rows at both tips; omega rows at both tips when sigma0 != 0).
LinearSystem assemble(const Problem& problem);

// Replace tip collocation rows by endpoint-interpolation constraints.
void apply_tip_conditions(LinearSystem& system, const Problem& problem);

struct SolveDiagnostics {
  double relative_residual = 0.0;
  double condition_estimate = 0.0;
  double min_pivot = 0.0;
  double growth = 0.0;
};

struct SolveResult {
  std::vector<double> d;  // sigma^S control coefficients
  std::vector<double> q;  // omega^S control coefficients
  SolveDiagnostics diagnostics;
};

// Dense LU with partial pivoting; refuses pivots below 1e-14 * max|A|.
SolveResult solve_dense(const LinearSystem& system);

}  // namespace igabem

#endif
