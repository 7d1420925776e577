#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <random>

#include "igabem/assembly.hpp"
#include "igabem/errors.hpp"
#include "igabem/fields.hpp"
#include "igabem/presets.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace igabem;

namespace {

MeshSpec uniform_mesh(int elements) { return MeshSpec{elements, 2, false, 1.2}; }

Problem make_problem(NurbsCurve curve, BulkMaterial bulk, SurfaceMaterial surface,
                     FarFieldLoad load, int regular_order = 64, int singular_order = 48) {
  AssemblyOptions options;
  options.regular_order = regular_order;
  options.singular.gauss_order_singular = singular_order;
  ElementMesh mesh = make_mesh(curve);
  return Problem{std::move(curve), std::move(mesh), bulk, surface, load, options};
}

// Arc of the benchmark shape: radius 1 circle, normal angles pi/4 .. 3pi/4.
NurbsCurve benchmark_arc(int elements, bool graded = false) {
  return circular_arc_curve({0, 0}, 1.0, 0.25 * M_PI, 0.75 * M_PI,
                            MeshSpec{elements, 2, graded, 1.2});
}

NurbsCurve straight_segment(int elements, double half_length = 5.0) {
  return segment_curve({half_length, 0.0}, {-half_length, 0.0}, uniform_mesh(elements));
}

std::vector<double> stack(const std::vector<double>& d, const std::vector<double>& q) {
  std::vector<double> x = d;
  x.insert(x.end(), q.begin(), q.end());
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

/* The decisive sign-and-scaling check. For arbitrary smooth coefficient
   vectors (not a solution of anything), the operator part of each discrete
   row must equal the corresponding tangential/normal surface derivative of
   the single-layer displacement generated by the same traction-jump density.
   The oracle computes that displacement by direct refined quadrature of the
   point-force kernel along the curve (the log singularity is integrable) and
   differentiates it by Richardson-extrapolated central differences along the
   curve. This ties every kernel, Jacobian, and prefactor to the layer
   potential itself. */
TEST_CASE("discrete rows match the single-layer derivative oracle") {
  const BulkMaterial bulk{2.0, 0.3};
  const SurfaceMaterial surface{5.0, 0.0, 0.5};  // stiffness 10, tension 1/2
  const FarFieldLoad load{};                     // irrelevant here
  Problem problem = make_problem(benchmark_arc(6), bulk, surface, load);

  const int n = problem.curve.control_count();
  auto prob = std::make_shared<Problem>(problem);
  SurfaceSolution state;
  state.problem = prob;
  for (int j = 0; j < n; ++j) {
    state.d.push_back(std::sin(2.3 * j + 0.4));
    state.q.push_back(0.3 * std::cos(1.7 * j));
  }

  const auto layer_displacement = [&](double tau) {
    // u(C(tau)) = sum_e int G(C(tau), C(xi)) Dt(xi) J1(xi) dxi
    Vec2 acc;
    const Vec2 x = prob->curve.point(tau);
    for (const auto& el : prob->mesh.elements) {
      for (int comp = 0; comp < 2; ++comp) {
        const std::function<double(double)> f = [&, comp](double xi) {
          const SurfaceFieldSample s = surface_fields(state, xi);
          const LocalFrame fr = prob->curve.frame(xi);
          const TractionJump j = density_g(fr, s.sigma_s, s.omega_s, s.dsigma_ds, s.domega_ds,
                                           surface.surface_tension);
          const Mat2 g = kelvin(x, fr.point, bulk);
          const Vec2 u = g.apply({j.g1, j.g2}) * fr.jacobian;
          return comp == 0 ? u.x : u.y;
        };
        double v = 0.0;
        if (tau > el.begin + 1e-12 && tau < el.end - 1e-12) {
          v = igabem::testing::integrate_refined_toward(f, el.begin, tau, false, 28) +
              igabem::testing::integrate_refined_toward(f, tau, el.end, true, 28);
        } else {
          const bool toward_left = std::abs(tau - el.begin) < std::abs(el.end - tau);
          v = igabem::testing::integrate_refined_toward(f, el.begin, el.end, toward_left, 20);
        }
        (comp == 0 ? acc.x : acc.y) += v;
      }
    }
    return acc;
  };

  const BieOperator op(*prob);
  const std::vector<double> x = stack(state.d, state.q);

  for (double tau : {0.37, 0.62}) {
    const BieOperator::Rows rows = op.rows(tau);
    // Subtract the collocation part to isolate the operator term.
    const BasisDerivs basis = prob->curve.basis_derivs(tau, 0);
    double colloc_d = 0.0, colloc_q = 0.0;
    for (int l = 0; l < basis.count; ++l) {
      colloc_d += basis.d[0][l] * state.d[basis.first + l];
      colloc_q += basis.d[0][l] * state.q[basis.first + l];
    }
    const double op_sigma = colloc_d - dot(rows.sigma, x);  // = stiffness * K_sigma[X]
    const double op_omega = colloc_q - dot(rows.omega, x);  // = K_omega[X]

    const LocalFrame f0 = prob->curve.frame(tau);
    const double h = 2e-3;
    const auto diff = [&](double step) {
      const Vec2 fp = layer_displacement(tau + step);
      const Vec2 fm = layer_displacement(tau - step);
      return (fp - fm) / (2.0 * step);
    };
    const Vec2 d1 = diff(h), d2 = diff(h / 2);
    const Vec2 du_dxi = (d2 * 4.0 - d1) / 3.0;
    const Vec2 du_ds = du_dxi / f0.jacobian;

    const double want_sigma = surface.stiffness() * f0.tangent().dot(du_ds);
    const double want_omega = f0.normal().dot(du_ds);

    CHECK(op_sigma == doctest::Approx(want_sigma).epsilon(2e-4));
    CHECK(op_omega == doctest::Approx(want_omega).epsilon(2e-4));
  }
}

TEST_CASE("degenerate surface: zero coefficients solve the system") {
  // No stiffness, no tension, shear-free load: the solution vector vanishes.
  const BulkMaterial bulk{2.0, 0.35};
  const SurfaceMaterial surface{0.0, 0.0, 0.0};
  const FarFieldLoad load{0.1, 0.0, 0.04};
  Problem problem = make_problem(straight_segment(10), bulk, surface, load);
  LinearSystem sys = assemble(problem);
  apply_tip_conditions(sys, problem);
  const SolveResult res = solve_dense(sys);

  // Forcing only lives in the constant-tension term, which is zero here.
  for (double v : sys.rhs) CHECK(std::abs(v) < 1e-15);
  for (double v : res.d) CHECK(std::abs(v) < 1e-12);
  for (double v : res.q) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("straight segment under transverse load: reflection symmetry of the system") {
  const BulkMaterial bulk{2.0, 0.35};
  const SurfaceMaterial surface{40.0, 10.0, 0.25};
  const FarFieldLoad load{0.0, 0.0, 0.1};
  Problem problem = make_problem(straight_segment(12), bulk, surface, load, 48, 32);
  LinearSystem sys = assemble(problem);
  apply_tip_conditions(sys, problem);
  const int n = sys.field_count;

  const auto scale = sys.matrix.max_abs();
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < n; ++j) {
      const int am = n - 1 - a, jm = n - 1 - j;
      // mirror: d block even/even, q block odd/odd, cross blocks mixed
      CHECK(std::abs(sys.matrix(a, j) - sys.matrix(am, jm)) < 1e-12 * scale);
      CHECK(std::abs(sys.matrix(a, n + j) + sys.matrix(am, n + jm)) < 1e-12 * scale);
      CHECK(std::abs(sys.matrix(n + a, j) + sys.matrix(n + am, jm)) < 1e-12 * scale);
      CHECK(std::abs(sys.matrix(n + a, n + j) - sys.matrix(n + am, n + jm)) < 1e-12 * scale);
    }
    CHECK(std::abs(sys.rhs[a] - sys.rhs[n - 1 - a]) < 1e-12 * (1.0 + std::abs(sys.rhs[a])));
  }

  // and the solved rotation measure vanishes along the straight surface
  const SolveResult res = solve_dense(sys);
  double dmax = 0.0;
  for (double v : res.d) dmax = std::max(dmax, std::abs(v));
  for (double v : res.q) CHECK(std::abs(v) < 1e-10 * dmax);
}

TEST_CASE("load vector structure under zero load") {
  const BulkMaterial bulk{2.0, 0.35};
  const FarFieldLoad none{};

  // with tension: only the constant forcing in the non-replaced sigma rows
  const SurfaceMaterial tense{40.0, 10.0, 0.25};
  Problem p1 = make_problem(straight_segment(8), bulk, tense, none, 32, 24);
  LinearSystem s1 = assemble(p1);
  apply_tip_conditions(s1, p1);
  const int n = s1.field_count;
  for (int a = 1; a + 1 < n; ++a) {
    CHECK(s1.rhs[a] == 0.25);
    CHECK(s1.rhs[n + a] == 0.0);
  }
  CHECK(s1.rhs[0] == 0.0);
  CHECK(s1.rhs[n - 1] == 0.0);

  // without tension: identically zero
  const SurfaceMaterial loose{40.0, 10.0, 0.0};
  Problem p2 = make_problem(straight_segment(8), bulk, loose, none, 32, 24);
  LinearSystem s2 = assemble(p2);
  apply_tip_conditions(s2, p2);
  for (double v : s2.rhs) CHECK(v == 0.0);
}

TEST_CASE("tip condition rows") {
  const BulkMaterial bulk{2.0, 0.35};
  const FarFieldLoad load{0.05, 0.0, 0.1};

  SUBCASE("with surface tension all four tip rows become constraints") {
    const SurfaceMaterial surface{40.0, 10.0, 0.25};
    Problem problem = make_problem(straight_segment(8), bulk, surface, load, 32, 24);
    LinearSystem sys = assemble(problem);
    apply_tip_conditions(sys, problem);
    const int n = sys.field_count;
    for (const int row : {0, n - 1, n, 2 * n - 1}) {
      int nonzero = 0;
      for (int j = 0; j < 2 * n; ++j) {
        if (sys.matrix(row, j) != 0.0) ++nonzero;
      }
      CHECK(nonzero == 1);
      CHECK(sys.rhs[row] == 0.0);
    }
    CHECK(sys.matrix(0, 0) == doctest::Approx(1.0));
    CHECK(sys.matrix(n - 1, n - 1) == doctest::Approx(1.0));
    CHECK(sys.matrix(n, n) == doctest::Approx(1.0));
    CHECK(sys.matrix(2 * n - 1, 2 * n - 1) == doctest::Approx(1.0));
  }

  SUBCASE("without tension only the stress rows are replaced") {
    const SurfaceMaterial surface{40.0, 10.0, 0.0};
    Problem problem = make_problem(straight_segment(8), bulk, surface, load, 32, 24);
    LinearSystem sys = assemble(problem);
    apply_tip_conditions(sys, problem);
    const int n = sys.field_count;
    for (const int row : {0, n - 1}) {
      int nonzero = 0;
      for (int j = 0; j < 2 * n; ++j) {
        if (sys.matrix(row, j) != 0.0) ++nonzero;
      }
      CHECK(nonzero == 1);
    }
    // the rotation rows at the tips keep their collocation structure
    int nonzero_omega_tip = 0;
    for (int j = 0; j < 2 * n; ++j) {
      if (sys.matrix(n, j) != 0.0) ++nonzero_omega_tip;
    }
    CHECK(nonzero_omega_tip > 1);
  }
}

TEST_CASE("solved tip values vanish") {
  const BulkMaterial bulk{2.0, 0.35};
  const SurfaceMaterial surface{40.0, 10.0, 0.25};
  const FarFieldLoad load{0.1, 0.0, 0.0};
  Problem problem = make_problem(straight_segment(12), bulk, surface, load, 48, 32);
  LinearSystem sys = assemble(problem);
  apply_tip_conditions(sys, problem);
  const SolveResult res = solve_dense(sys);
  double dmax = 0.0;
  for (double v : res.d) dmax = std::max(dmax, std::abs(v));
  CHECK(dmax > 0.0);
  CHECK(std::abs(res.d.front()) < 1e-10 * dmax);
  CHECK(std::abs(res.d.back()) < 1e-10 * dmax);
  CHECK(res.diagnostics.relative_residual < 1e-10);
}

TEST_CASE("assembly is deterministic and parallel matches serial bitwise") {
  const BulkMaterial bulk{1.0, 0.33};
  const SurfaceMaterial surface{20.0, 5.0, 0.1};
  const FarFieldLoad load{0.0, 0.02, 0.1};
  Problem problem = make_problem(benchmark_arc(10, true), bulk, surface, load, 48, 32);

  const LinearSystem s1 = assemble(problem);
  const LinearSystem s2 = assemble(problem);
  CHECK(std::memcmp(s1.matrix.data().data(), s2.matrix.data().data(),
                    s1.matrix.data().size() * sizeof(double)) == 0);
  CHECK(s1.rhs == s2.rhs);

  Problem par = problem;
  par.options.parallelism = Parallelism::kOpenMP;
  const LinearSystem s3 = assemble(par);
  CHECK(std::memcmp(s1.matrix.data().data(), s3.matrix.data().data(),
                    s1.matrix.data().size() * sizeof(double)) == 0);
  CHECK(s1.rhs == s3.rhs);
}

TEST_CASE("entries stabilize as the regular order grows") {
  const BulkMaterial bulk{1.0, 0.33};
  const SurfaceMaterial surface{20.0, 5.0, 0.1};
  const FarFieldLoad load{0.0, 0.0, 1.0};

  // Coarse mesh so low orders genuinely underresolve the kernels; on the
  // study meshes order 16 is already converged to rounding.
  const auto matrix_at_order = [&](int order) {
    Problem problem = make_problem(benchmark_arc(4), bulk, surface, load, order, 48);
    LinearSystem sys = assemble(problem);
    apply_tip_conditions(sys, problem);
    return sys.matrix;
  };

  const DenseMatrix a4 = matrix_at_order(4);
  const DenseMatrix a8 = matrix_at_order(8);
  const DenseMatrix a16 = matrix_at_order(16);
  const DenseMatrix a32 = matrix_at_order(32);
  const DenseMatrix a200 = matrix_at_order(200);
  const DenseMatrix a256 = matrix_at_order(256);

  const auto max_diff = [](const DenseMatrix& x, const DenseMatrix& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.data().size(); ++i) {
      m = std::max(m, std::abs(x.data()[i] - y.data()[i]));
    }
    return m;
  };
  const double d1 = max_diff(a8, a4);
  const double d2 = max_diff(a16, a8);
  const double d3 = max_diff(a32, a16);
  CHECK(d2 < d1);
  CHECK(d3 < d2);
  CHECK(max_diff(a256, a200) < 1e-10 * a200.max_abs());
}

TEST_CASE("literal density frame agrees on straight geometry and differs on arcs") {
  const BulkMaterial bulk{2.0, 0.35};
  const SurfaceMaterial surface{40.0, 10.0, 0.25};
  const FarFieldLoad load{0.1, 0.0, 0.05};

  Problem flat = make_problem(straight_segment(8), bulk, surface, load, 48, 32);
  Problem flat_lit = flat;
  flat_lit.options.literal_density_frame = true;
  const LinearSystem f1 = assemble(flat);
  const LinearSystem f2 = assemble(flat_lit);
  double dmax = 0.0;
  for (std::size_t i = 0; i < f1.matrix.data().size(); ++i) {
    dmax = std::max(dmax, std::abs(f1.matrix.data()[i] - f2.matrix.data()[i]));
  }
  CHECK(dmax < 1e-12 * f1.matrix.max_abs());

  Problem curved = make_problem(benchmark_arc(8), bulk, surface, load, 48, 32);
  Problem curved_lit = curved;
  curved_lit.options.literal_density_frame = true;
  const LinearSystem c1 = assemble(curved);
  const LinearSystem c2 = assemble(curved_lit);
  double cdiff = 0.0;
  for (std::size_t i = 0; i < c1.matrix.data().size(); ++i) {
    cdiff = std::max(cdiff, std::abs(c1.matrix.data()[i] - c2.matrix.data()[i]));
  }
  CHECK(cdiff > 1e-6 * c1.matrix.max_abs());
}

TEST_CASE("curved surface without tension keeps the rotation rows and solves") {
  const BulkMaterial bulk{2.0, 0.3};
  const SurfaceMaterial surface{30.0, 0.0, 0.0};
  const FarFieldLoad load{0.0, 0.0, 0.1};
  Problem problem = make_problem(benchmark_arc(10), bulk, surface, load, 48, 32);
  LinearSystem sys = assemble(problem);
  apply_tip_conditions(sys, problem);
  const SolveResult res = solve_dense(sys);
  CHECK(res.diagnostics.relative_residual < 1e-10);
  double dmax = 0.0;
  for (double v : res.d) dmax = std::max(dmax, std::abs(v));
  CHECK(dmax > 0.0);
  CHECK(std::abs(res.d.front()) < 1e-10 * dmax);
  CHECK(std::abs(res.d.back()) < 1e-10 * dmax);
  // the rotation field is a finite post-processed diagnostic here
  for (double v : res.q) CHECK(std::isfinite(v));
}

TEST_CASE("solution is insensitive to the symmetric-interval fraction") {
  const BulkMaterial bulk{1.0, 0.33};
  const SurfaceMaterial surface{20.0, 5.0, 0.1};
  const FarFieldLoad load{0.0, 0.0, 1.0};
  std::vector<double> mid_values;
  for (double frac : {1.0, 0.5, 0.25}) {
    Problem problem = make_problem(benchmark_arc(12), bulk, surface, load, 96, 48);
    problem.options.singular.delta_fraction = frac;
    LinearSystem sys = assemble(problem);
    apply_tip_conditions(sys, problem);
    const SolveResult res = solve_dense(sys);
    mid_values.push_back(res.d[res.d.size() / 2]);
  }
  CHECK(mid_values[1] == doctest::Approx(mid_values[0]).epsilon(1e-8));
  CHECK(mid_values[2] == doctest::Approx(mid_values[0]).epsilon(1e-8));
}

TEST_CASE("validation rejects unusable problems") {
  const BulkMaterial bulk{2.0, 0.35};
  const SurfaceMaterial surface{1.0, 0.0, 0.0};
  const FarFieldLoad load{};

  // degree 1 curve
  NurbsCurve linear(KnotVector(1, {0, 0, 0.5, 1, 1}), {{0, 0}, {1, 0}, {2, 0}}, {1, 1, 1});
  Problem p1 = make_problem(std::move(linear), bulk, surface, load);
  CHECK_THROWS_AS(validate_problem(p1), domain_error);

  // repeated interior knot
  NurbsCurve kinked(KnotVector(2, {0, 0, 0, 0.5, 0.5, 1, 1, 1}),
                    {{0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 1}}, {1, 1, 1, 1, 1});
  Problem p2 = make_problem(std::move(kinked), bulk, surface, load);
  CHECK_THROWS_AS(validate_problem(p2), domain_error);
}

TEST_CASE("solver refuses a near-singular system") {
  LinearSystem sys;
  sys.matrix = DenseMatrix(4);
  sys.field_count = 2;
  sys.rhs = {1.0, 1.0, 1.0, 1.0};
  for (int i = 0; i < 4; ++i) sys.matrix(i, i) = 1.0;
  sys.matrix(3, 3) = 1e-16;
  CHECK_THROWS_AS(solve_dense(sys), solver_error);
}

TEST_CASE("higher degree collocation points sit on interior knots and still assemble") {
  // Cubic basis puts interior collocation points exactly on knots; the
  // singular neighborhood then straddles two elements.
  const BulkMaterial bulk{2.0, 0.3};
  const SurfaceMaterial surface{30.0, 0.0, 0.2};
  const FarFieldLoad load{0.0, 0.0, 0.1};
  NurbsCurve curve = elevate_bezier(igabem::testing::quarter_circle(2.0), 3)
                         .refined(mesh_breakpoints(8, false, 1.0));
  Problem problem = make_problem(std::move(curve), bulk, surface, load, 48, 32);
  validate_problem(problem);

  // collocation points 2..n-3 coincide with knots for uniform cubics
  const auto& colloc = problem.mesh.collocation;
  bool found_on_knot = false;
  for (double c : colloc) {
    for (const auto& el : problem.mesh.elements) {
      if (c == el.begin && c > 0.0) found_on_knot = true;
    }
  }
  CHECK(found_on_knot);

  LinearSystem sys = assemble(problem);
  apply_tip_conditions(sys, problem);
  const SolveResult res = solve_dense(sys);
  CHECK(res.diagnostics.relative_residual < 1e-10);
  double dmax = 0.0;
  for (double v : res.d) dmax = std::max(dmax, std::abs(v));
  CHECK(dmax > 0.0);
  CHECK(std::abs(res.d.front()) < 1e-10 * dmax);
}
