#include "igabem/fields.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "igabem/errors.hpp"

namespace igabem {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SurfaceSolution solve_problem(Problem problem) {
  auto prob = std::make_shared<Problem>(std::move(problem));

  const auto t0 = std::chrono::steady_clock::now();
  LinearSystem sys = assemble(*prob);
  apply_tip_conditions(sys, *prob);
  const double t_assembly = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  SolveResult res = solve_dense(sys);
  const double t_solve = seconds_since(t1);

  SurfaceSolution sol;
  sol.problem = prob;
  sol.d = std::move(res.d);
  sol.q = std::move(res.q);
  sol.diagnostics = res.diagnostics;
  sol.assembly_seconds = t_assembly;
  sol.solve_seconds = t_solve;

  // Tip post-condition: the clamped basis interpolates the ends, so the tip
  // values are the end coefficients.
  const double d_scale = max_abs(sol.d);
  const int n = static_cast<int>(sol.d.size());
  if (d_scale > 0.0 &&
      std::max(std::abs(sol.d[0]), std::abs(sol.d[n - 1])) > 1e-10 * d_scale) {
    throw solver_error("tip condition violated for the surface stress");
  }
  if (prob->surface.surface_tension != 0.0) {
    const double q_scale = max_abs(sol.q);
    if (q_scale > 0.0 &&
        std::max(std::abs(sol.q[0]), std::abs(sol.q[n - 1])) > 1e-10 * q_scale) {
      throw solver_error("tip condition violated for the surface rotation");
    }
  }
  return sol;
}

SurfaceFieldSample surface_fields(const SurfaceSolution& sol, double xi) {
  const NurbsCurve& curve = sol.curve();
  const LocalFrame frame = curve.frame(xi);
  const BasisDerivs basis = curve.basis_derivs(xi, 1);

  SurfaceFieldSample out;
  out.xi = xi;
  out.point = frame.point;
  double dsig_dxi = 0.0, dome_dxi = 0.0;
  for (int l = 0; l < basis.count; ++l) {
    const int j = basis.first + l;
    out.sigma_s += basis.d[0][l] * sol.d[j];
    out.omega_s += basis.d[0][l] * sol.q[j];
    dsig_dxi += basis.d[1][l] * sol.d[j];
    dome_dxi += basis.d[1][l] * sol.q[j];
  }
  out.dsigma_ds = dsig_dxi / frame.jacobian;
  out.domega_ds = dome_dxi / frame.jacobian;

  const SurfaceMaterial& surf = sol.problem->surface;
  out.eps_s = (surf.stiffness() > 0.0)
                  ? (out.sigma_s - surf.surface_tension) / surf.stiffness()
                  : 0.0;
  const TractionJump jump = density_g(frame, out.sigma_s, out.omega_s, out.dsigma_ds,
                                      out.domega_ds, surf.surface_tension);
  out.jump_l = jump.jump_l;
  out.jump_n = jump.jump_n;
  out.s_tilde = curve.arc_length(xi) / curve.total_length();
  return out;
}

double von_mises(const Mat2& sigma, double s33) {
  const double a = sigma.xx - sigma.yy;
  const double b = sigma.yy - s33;
  const double c = s33 - sigma.xx;
  return std::sqrt(0.5 * (a * a + b * b + c * c) + 3.0 * sigma.xy * sigma.xy);
}

double relative_von_mises(const Mat2& sigma, double s33, const FarFieldLoad& load,
                          double poisson) {
  const Mat2 far{load.s11, load.s12, load.s12, load.s22};
  const double far_vm = von_mises(far, poisson * (load.s11 + load.s22));
  if (far_vm == 0.0) {
    throw domain_error("relative Von Mises undefined for a zero remote deviator");
  }
  return von_mises(sigma, s33) / far_vm;
}

FieldEvaluator::FieldEvaluator(const SurfaceSolution& sol, int quadrature_order)
    : sol_(&sol), rule_(gauss_legendre(quadrature_order)) {
  const ElementMesh& mesh = sol.problem->mesh;
  const NurbsCurve& curve = sol.curve();
  element_nodes_.resize(mesh.element_count());
  element_length_.resize(mesh.element_count());
  element_polyline_.resize(mesh.element_count());
  element_polyline_xi_.resize(mesh.element_count());

  constexpr int kPolyline = 9;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double a = mesh.elements[e].begin, b = mesh.elements[e].end;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto& nodes = element_nodes_[e];
    nodes.reserve(rule_.order());
    for (int i = 0; i < rule_.order(); ++i) {
      const double xi = mid + half * rule_.points[i];
      Node node;
      node.y = curve.point(xi);
      node.weighted_jump = jump_at(xi) * (half * rule_.weights[i]);
      nodes.push_back(node);
    }
    element_length_[e] = curve.arc_length(b) - curve.arc_length(a);
    for (int i = 0; i < kPolyline; ++i) {
      const double xi = a + (b - a) * i / (kPolyline - 1.0);
      element_polyline_[e].push_back(curve.point(xi));
      element_polyline_xi_[e].push_back(xi);
    }
  }
}

// Cartesian traction jump times the arc-length Jacobian at xi.
Vec2 FieldEvaluator::jump_at(double xi) const {
  const SurfaceFieldSample s = surface_fields(*sol_, xi);
  const LocalFrame frame = sol_->curve().frame(xi);
  const TractionJump jump = density_g(frame, s.sigma_s, s.omega_s, s.dsigma_ds, s.domega_ds,
                                      sol_->problem->surface.surface_tension);
  return Vec2{jump.g1, jump.g2} * frame.jacobian;
}

double FieldEvaluator::distance_to_surface(Vec2 x, int* element) const {
  double best = std::numeric_limits<double>::infinity();
  int best_e = 0;
  for (std::size_t e = 0; e < element_polyline_.size(); ++e) {
    const auto& poly = element_polyline_[e];
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
      const Vec2 p = poly[i], q = poly[i + 1];
      const Vec2 pq = q - p;
      const double len2 = pq.squared_norm();
      double t = (len2 > 0.0) ? (x - p).dot(pq) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double dist = (x - (p + pq * t)).norm();
      if (dist < best) {
        best = dist;
        best_e = static_cast<int>(e);
      }
    }
  }
  if (element) *element = best_e;
  return best;
}

double FieldEvaluator::near_threshold(int element) const {
  return 0.01 * element_length_[element];
}

void FieldEvaluator::check_distance(Vec2 x, double* dist_out, int* elem_out) const {
  int e = 0;
  const double dist = distance_to_surface(x, &e);
  if (dist < near_threshold(e)) {
    throw near_surface_error("field point closer to the surface than the evaluation threshold");
  }
  *dist_out = dist;
  *elem_out = e;
}

void FieldEvaluator::layer_terms(Vec2 x, Vec2* u, Mat2* grad) const {
  const ElementMesh& mesh = sol_->problem->mesh;
  const BulkMaterial& bulk = sol_->problem->bulk;
  Vec2 acc_u;
  Mat2 acc_g;

  for (int e = 0; e < mesh.element_count(); ++e) {
    // Refine toward the surface when the point sits within an element length.
    double dmin = std::numeric_limits<double>::infinity();
    double xi_near = mesh.elements[e].begin;
    for (std::size_t i = 0; i < element_polyline_[e].size(); ++i) {
      const double d = (x - element_polyline_[e][i]).norm();
      if (d < dmin) {
        dmin = d;
        xi_near = element_polyline_xi_[e][i];
      }
    }
    const bool subdivide = dmin < element_length_[e];

    const auto contribute = [&](Vec2 y, Vec2 wj) {
      if (u) {
        const Mat2 g = kelvin(x, y, bulk);
        acc_u += g.apply(wj);
      }
      if (grad) {
        const KelvinGradient kg = kelvin_gradient(x, y, bulk);
        acc_g.xx += kg.d[0][0][0] * wj.x + kg.d[0][1][0] * wj.y;
        acc_g.xy += kg.d[0][0][1] * wj.x + kg.d[0][1][1] * wj.y;
        acc_g.yx += kg.d[1][0][0] * wj.x + kg.d[1][1][0] * wj.y;
        acc_g.yy += kg.d[1][0][1] * wj.x + kg.d[1][1][1] * wj.y;
      }
    };

    if (!subdivide) {
      for (const Node& node : element_nodes_[e]) contribute(node.y, node.weighted_jump);
      continue;
    }
    const NurbsCurve& curve = sol_->curve();
    double lo = mesh.elements[e].begin, hi = mesh.elements[e].end;
    const auto span = [&](double a, double b) {
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int i = 0; i < rule_.order(); ++i) {
        const double xi = mid + half * rule_.points[i];
        contribute(curve.point(xi), jump_at(xi) * (half * rule_.weights[i]));
      }
    };
    const bool near_left = std::abs(xi_near - lo) <= std::abs(hi - xi_near);
    for (int lvl = 0; lvl < 3; ++lvl) {
      const double mid = 0.5 * (lo + hi);
      if (near_left) {
        span(mid, hi);
        hi = mid;
      } else {
        span(lo, mid);
        lo = mid;
      }
    }
    span(lo, hi);
  }
  if (u) *u = acc_u;
  if (grad) *grad = acc_g;
}

Vec2 FieldEvaluator::displacement(Vec2 x) const {
  double dist = 0.0;
  int e = 0;
  check_distance(x, &dist, &e);
  Vec2 u_layer;
  layer_terms(x, &u_layer, nullptr);
  return farfield_displacement(sol_->problem->load, sol_->problem->bulk, x) + u_layer;
}

FieldSample FieldEvaluator::sample(Vec2 x) const {
  double dist = 0.0;
  int e = 0;
  check_distance(x, &dist, &e);

  const BulkMaterial& bulk = sol_->problem->bulk;
  const FarFieldLoad& load = sol_->problem->load;

  Vec2 u_layer;
  Mat2 grad_layer;
  layer_terms(x, &u_layer, &grad_layer);

  FieldSample out;
  out.point = x;
  out.u = farfield_displacement(load, bulk, x) + u_layer;
  const Mat2 grad = farfield_displacement_gradient(load, bulk) + grad_layer;
  out.strain = Mat2{grad.xx, 0.5 * (grad.xy + grad.yx), 0.5 * (grad.xy + grad.yx), grad.yy};
  out.stress = stress_from_strain(out.strain, bulk);
  out.s33 = bulk.poisson * (out.stress.xx + out.stress.yy);
  out.von_mises = von_mises(out.stress, out.s33);
  const Mat2 far{load.s11, load.s12, load.s12, load.s22};
  const double far_vm = von_mises(far, bulk.poisson * (load.s11 + load.s22));
  out.relative_von_mises = (far_vm > 0.0) ? out.von_mises / far_vm
                                          : std::numeric_limits<double>::quiet_NaN();
  return out;
}

ResidualEvaluator::ResidualEvaluator(const SurfaceSolution& sol)
    : sol_(&sol), op_(*sol.problem) {
  // Field magnitudes for normalization, sampled along the curve.
  const auto& kv = sol.curve().knot_vector();
  const double a = kv.domain_begin(), b = kv.domain_end();
  double smax = 0.0, omax = 0.0;
  for (int i = 0; i <= 512; ++i) {
    const SurfaceFieldSample s = surface_fields(sol, a + (b - a) * i / 512.0);
    smax = std::max(smax, std::abs(s.sigma_s));
    omax = std::max(omax, std::abs(s.omega_s));
  }
  sigma_scale_ = (smax > 0.0) ? smax : 1.0;
  omega_scale_ = (omax > 0.0) ? omax : 1.0;
}

BieResidual ResidualEvaluator::at(double xi) const {
  const BieOperator::Rows rows = op_.rows(xi);
  const int n = static_cast<int>(sol_->d.size());
  double def_sigma = -rows.rhs_sigma;
  double def_omega = -rows.rhs_omega;
  for (int j = 0; j < n; ++j) {
    def_sigma += rows.sigma[j] * sol_->d[j] + rows.sigma[n + j] * sol_->q[j];
    def_omega += rows.omega[j] * sol_->d[j] + rows.omega[n + j] * sol_->q[j];
  }
  return {def_sigma / sigma_scale_, def_omega / omega_scale_};
}

}  // namespace igabem
