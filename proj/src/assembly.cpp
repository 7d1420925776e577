#include "igabem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "igabem/errors.hpp"

namespace igabem {

void validate_problem(const Problem& problem) {
  validate(problem.bulk);
  validate(problem.surface);
  if (problem.curve.degree() < 2) {
    throw domain_error("solver requires curve degree >= 2");
  }
  if (problem.curve.knot_vector().has_interior_multiplicity()) {
    throw domain_error("solver requires simple interior knots (C^1 surface parameterization)");
  }
  if (static_cast<int>(problem.mesh.collocation.size()) != problem.curve.control_count()) {
    throw domain_error("mesh does not match the curve");
  }
  if (!(problem.options.singular.delta_fraction > 0.0 &&
        problem.options.singular.delta_fraction <= 1.0)) {
    throw domain_error("singular policy: delta_fraction must be in (0, 1]");
  }
  // Cusp scan: the frame evaluation throws on a vanishing Jacobian.
  for (const auto& el : problem.mesh.elements) {
    for (double t : {0.12, 0.5, 0.88}) {
      problem.curve.frame(el.begin + t * (el.end - el.begin));
    }
  }
  for (double xi : problem.mesh.collocation) problem.curve.frame(xi);
}

struct BieOperator::SourceContext {
  double xi0 = 0.0;
  LocalFrame frame;
  Vec2 t0, n0;
  double sin_b0 = 0.0, cos_b0 = 0.0;
  double kappa = 0.0, pref = 0.0, stiffness = 0.0, sigma0 = 0.0;

  bool has_neighborhood = false;
  double delta = 0.0;

  // Cauchy strengths of the four row/block integrands at the active entries.
  int h_first = 0, h_count = 0;
  std::array<double, kMaxDegree + 1> h_sigma_d{}, h_sigma_q{}, h_omega_d{}, h_omega_q{};
};

BieOperator::BieOperator(const Problem& problem)
    : problem_(&problem),
      regular_rule_(gauss_legendre(problem.options.regular_order)),
      singular_rule_(gauss_legendre(problem.options.singular.gauss_order_singular)) {
  const auto& mesh = problem.mesh;
  element_points_.resize(mesh.element_count());
  element_node_weights_.resize(mesh.element_count());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const double a = mesh.elements[e].begin, b = mesh.elements[e].end;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    element_points_[e].reserve(regular_rule_.order());
    element_node_weights_[e].reserve(regular_rule_.order());
    for (int i = 0; i < regular_rule_.order(); ++i) {
      element_points_[e].push_back(evaluate_point(mid + half * regular_rule_.points[i]));
      element_node_weights_[e].push_back(half * regular_rule_.weights[i]);
    }
  }
}

BieOperator::PointEval BieOperator::evaluate_point(double xi) const {
  const NurbsCurve& curve = problem_->curve;
  PointEval pe;
  pe.xi = xi;
  pe.basis = curve.basis_derivs(xi, 2);
  Vec2 p, d1, d2;
  for (int l = 0; l < pe.basis.count; ++l) {
    const Vec2& cp = curve.control_points()[pe.basis.first + l];
    p += cp * pe.basis.d[0][l];
    d1 += cp * pe.basis.d[1][l];
    d2 += cp * pe.basis.d[2][l];
  }
  pe.frame = make_local_frame(p, d1, d2, curve.length_scale());
  return pe;
}

void BieOperator::accumulate(const SourceContext& src, const PointEval& at, double weight,
                             Rows& rows) const {
  const KernelEval k = phi_kernels(src.frame, at.frame.point);

  Vec2 t, n;
  double j_over_r;  // J1/R entering the normal jump component
  if (problem_->options.literal_density_frame) {
    t = src.t0;
    n = src.n0;
    j_over_r = src.frame.jacobian * at.frame.curvature;
  } else {
    t = at.frame.tangent();
    n = at.frame.normal();
    j_over_r = at.frame.jacobian * at.frame.curvature;
  }

  const int n_fields = problem_->curve.control_count();
  const bool with_tension = src.sigma0 != 0.0;
  for (int l = 0; l < at.basis.count; ++l) {
    const int col = at.basis.first + l;
    const double nv = at.basis.d[0][l];
    const double dv = at.basis.d[1][l];

    // J1-scaled local jump components generated by the trial fields.
    const double pl_d = dv, pn_d = -j_over_r * nv;
    const Vec2 g_d = t * pl_d + n * pn_d;
    const double gt = g_d.dot(src.t0);
    const double gn = g_d.dot(src.n0);
    const double gm = src.cos_b0 * g_d.x - src.sin_b0 * g_d.y;
    const double gk = src.sin_b0 * g_d.x + src.cos_b0 * g_d.y;
    const double ksig_d = src.pref * (src.kappa * gt * k.phi1 + gk * k.phi2 - gm * k.phi3);
    const double kome_d = src.pref * (src.kappa * gn * k.phi1 - gm * k.phi2 - gk * k.phi3);
    rows.sigma[col] -= src.stiffness * weight * ksig_d;
    rows.omega[col] -= weight * kome_d;

    if (with_tension) {
      const double pl_q = src.sigma0 * j_over_r * nv, pn_q = src.sigma0 * dv;
      const Vec2 g_q = t * pl_q + n * pn_q;
      const double qt = g_q.dot(src.t0);
      const double qn = g_q.dot(src.n0);
      const double qm = src.cos_b0 * g_q.x - src.sin_b0 * g_q.y;
      const double qk = src.sin_b0 * g_q.x + src.cos_b0 * g_q.y;
      const double ksig_q = src.pref * (src.kappa * qt * k.phi1 + qk * k.phi2 - qm * k.phi3);
      const double kome_q = src.pref * (src.kappa * qn * k.phi1 - qm * k.phi2 - qk * k.phi3);
      rows.sigma[n_fields + col] -= src.stiffness * weight * ksig_q;
      rows.omega[n_fields + col] -= weight * kome_q;
    }
  }
}

void BieOperator::integrate_plain(const SourceContext& src, int element, Rows& rows) const {
  const auto& pts = element_points_[element];
  const auto& wts = element_node_weights_[element];
  for (std::size_t i = 0; i < pts.size(); ++i) accumulate(src, pts[i], wts[i], rows);
}

void BieOperator::integrate_span(const SourceContext& src, double a, double b,
                                 Rows& rows) const {
  const QuadratureRule& rule = regular_rule_;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < rule.order(); ++i) {
    accumulate(src, evaluate_point(mid + half * rule.points[i]), half * rule.weights[i], rows);
  }
}

void BieOperator::integrate_toward_source(const SourceContext& src, double a, double b,
                                          Rows& rows) const {
  double lo = a, hi = b;
  const bool near_left = std::abs(src.xi0 - a) <= std::abs(b - src.xi0);
  for (int lvl = 0; lvl < problem_->options.near_levels; ++lvl) {
    const double mid = 0.5 * (lo + hi);
    if (near_left) {
      integrate_span(src, mid, hi, rows);
      hi = mid;
    } else {
      integrate_span(src, lo, mid, rows);
      lo = mid;
    }
  }
  integrate_span(src, lo, hi, rows);
}

BieOperator::Rows BieOperator::rows(double xi0) const {
  const Problem& prob = *problem_;
  const NurbsCurve& curve = prob.curve;
  const ElementMesh& mesh = prob.mesh;
  const int n = curve.control_count();

  Rows out;
  out.sigma.assign(2 * n, 0.0);
  out.omega.assign(2 * n, 0.0);

  SourceContext src;
  src.xi0 = xi0;
  src.frame = curve.frame(xi0);
  src.t0 = src.frame.tangent();
  src.n0 = src.frame.normal();
  src.sin_b0 = std::sin(src.frame.normal_angle);
  src.cos_b0 = std::cos(src.frame.normal_angle);
  src.kappa = prob.bulk.kappa();
  src.pref = 1.0 / (2.0 * M_PI * prob.bulk.shear_modulus * (1.0 + src.kappa));
  src.stiffness = prob.surface.stiffness();
  src.sigma0 = prob.surface.surface_tension;

  // Collocation (left-hand) terms and load terms.
  const BasisDerivs basis0 = curve.basis_derivs(xi0, 1);
  for (int l = 0; l < basis0.count; ++l) {
    out.sigma[basis0.first + l] += basis0.d[0][l];
    out.omega[n + basis0.first + l] += basis0.d[0][l];
  }
  const SigmaPair sp = farfield_rhs_sigma(prob.load, prob.bulk, src.frame.normal_angle);
  out.rhs_sigma = src.sigma0 +
                  src.stiffness * (-src.sin_b0 * sp.sigma1 + src.cos_b0 * sp.sigma2);
  out.rhs_omega = src.cos_b0 * sp.sigma1 + src.sin_b0 * sp.sigma2;

  // Singular neighborhood around xi0 (none at the tips).
  const double begin = curve.knot_vector().domain_begin();
  const double end = curve.knot_vector().domain_end();
  const double snap = 1e-12 * (end - begin);
  double nb_left = 0.0, nb_right = 0.0;
  if (xi0 > begin + snap && xi0 < end - snap) {
    const int e = mesh.element_of(xi0);
    const auto& el = mesh.elements[e];
    nb_left = el.begin;
    nb_right = el.end;
    // A collocation point on an interior knot is singular for both adjacent
    // elements; extend the neighborhood across the knot (basis is C^1 there).
    if (xi0 - el.begin <= snap && e > 0) {
      nb_left = mesh.elements[e - 1].begin;
    } else if (el.end - xi0 <= snap && e + 1 < mesh.element_count()) {
      nb_right = mesh.elements[e + 1].end;
    }
    src.delta =
        prob.options.singular.delta_fraction * std::min(xi0 - nb_left, nb_right - xi0);
    src.has_neighborhood = src.delta > 0.0;
  }

  if (src.has_neighborhood) {
    // Only the tangential-projection kernel is Cauchy singular; its strength
    // comes from the local jump components of each trial function at xi0.
    src.h_first = basis0.first;
    src.h_count = basis0.count;
    const double j_over_r = src.frame.jacobian * src.frame.curvature;
    for (int l = 0; l < basis0.count; ++l) {
      const double nv = basis0.d[0][l], dv = basis0.d[1][l];
      const double pl_d = dv, pn_d = -j_over_r * nv;
      const double pl_q = src.sigma0 * j_over_r * nv, pn_q = src.sigma0 * dv;
      const double kf = src.pref * src.kappa;
      src.h_sigma_d[l] = -src.stiffness * kf * phi1_cauchy_strength(src.frame, pl_d);
      src.h_sigma_q[l] = -src.stiffness * kf * phi1_cauchy_strength(src.frame, pl_q);
      src.h_omega_d[l] = -kf * phi1_cauchy_strength(src.frame, pn_d);
      src.h_omega_q[l] = -kf * phi1_cauchy_strength(src.frame, pn_q);
    }
  }

  for (int e = 0; e < mesh.element_count(); ++e) {
    const double a = mesh.elements[e].begin, b = mesh.elements[e].end;
    if (src.has_neighborhood && b > xi0 - src.delta && a < xi0 + src.delta) {
      if (a < xi0 - src.delta) integrate_toward_source(src, a, xi0 - src.delta, out);
      if (xi0 + src.delta < b) integrate_toward_source(src, xi0 + src.delta, b, out);
    } else {
      const double dist = std::max({a - xi0, xi0 - b, 0.0});
      if (dist < b - a) {
        integrate_toward_source(src, a, b, out);
      } else {
        integrate_plain(src, e, out);
      }
    }
  }

  if (src.has_neighborhood) {
    // Regularized symmetric piece: two Gauss panels meeting at xi0. The
    // principal value of the subtracted Cauchy part vanishes by symmetry.
    for (int side = 0; side < 2; ++side) {
      const double a = (side == 0) ? xi0 - src.delta : xi0;
      const double b = (side == 0) ? xi0 : xi0 + src.delta;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int i = 0; i < singular_rule_.order(); ++i) {
        const double xi = mid + half * singular_rule_.points[i];
        const double w = half * singular_rule_.weights[i];
        accumulate(src, evaluate_point(xi), w, out);
        const double cfac = w / (xi - xi0);
        for (int l = 0; l < src.h_count; ++l) {
          const int col = src.h_first + l;
          out.sigma[col] -= src.h_sigma_d[l] * cfac;
          out.omega[col] -= src.h_omega_d[l] * cfac;
          if (src.sigma0 != 0.0) {
            out.sigma[n + col] -= src.h_sigma_q[l] * cfac;
            out.omega[n + col] -= src.h_omega_q[l] * cfac;
          }
        }
      }
    }
  }

  for (double v : out.sigma) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite entry in sigma row at collocation parameter " << xi0;
      throw assembly_error(msg.str());
    }
  }
  for (double v : out.omega) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite entry in omega row at collocation parameter " << xi0;
      throw assembly_error(msg.str());
    }
  }
  return out;
}

LinearSystem assemble(const Problem& problem) {
  validate_problem(problem);
  const int n = problem.curve.control_count();
  LinearSystem sys;
  sys.matrix = DenseMatrix(2 * n);
  sys.rhs.assign(2 * n, 0.0);
  sys.field_count = n;

  const BieOperator op(problem);
  const auto& colloc = problem.mesh.collocation;
  const bool replace_omega_tips = problem.surface.surface_tension != 0.0;

  const auto do_row = [&](int a) {
    const bool tip = (a == 0 || a == n - 1);
    if (tip && replace_omega_tips) return;  // both rows will be replaced
    const BieOperator::Rows rows = op.rows(colloc[a]);
    if (!tip) {
      for (int j = 0; j < 2 * n; ++j) sys.matrix(a, j) = rows.sigma[j];
      sys.rhs[a] = rows.rhs_sigma;
    }
    for (int j = 0; j < 2 * n; ++j) sys.matrix(n + a, j) = rows.omega[j];
    sys.rhs[n + a] = rows.rhs_omega;
  };

  if (problem.options.parallelism == Parallelism::kOpenMP) {
    std::exception_ptr failure = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int a = 0; a < n; ++a) {
      try {
        do_row(a);
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
        {
          if (!failure) failure = std::current_exception();
        }
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (int a = 0; a < n; ++a) do_row(a);
  }
  return sys;
}

void apply_tip_conditions(LinearSystem& system, const Problem& problem) {
  const int n = system.field_count;
  const NurbsCurve& curve = problem.curve;
  const double tips[2] = {curve.knot_vector().domain_begin(), curve.knot_vector().domain_end()};
  const int rows[2] = {0, n - 1};

  for (int t = 0; t < 2; ++t) {
    const BasisDerivs basis = curve.basis_derivs(tips[t], 0);
    const int a = rows[t];
    for (int j = 0; j < 2 * n; ++j) system.matrix(a, j) = 0.0;
    for (int l = 0; l < basis.count; ++l) system.matrix(a, basis.first + l) = basis.d[0][l];
    system.rhs[a] = 0.0;

    if (problem.surface.surface_tension != 0.0) {
      for (int j = 0; j < 2 * n; ++j) system.matrix(n + a, j) = 0.0;
      for (int l = 0; l < basis.count; ++l) {
        system.matrix(n + a, n + basis.first + l) = basis.d[0][l];
      }
      system.rhs[n + a] = 0.0;
    }
  }
}

SolveResult solve_dense(const LinearSystem& system) {
  const DenseMatrix& a = system.matrix;
  const LuFactorization f = lu_factor(a);
  const double scale = a.max_abs();
  if (f.min_pivot < 1e-14 * scale) {
    std::ostringstream msg;
    msg << "near-singular system: min pivot " << f.min_pivot << " vs matrix scale " << scale
        << ", condition estimate " << condition_estimate(a, f);
    throw solver_error(msg.str());
  }

  std::vector<double> x = lu_solve(f, system.rhs);
  double bnorm = 0.0;
  for (double v : system.rhs) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  double resid = residual_norm(a, x, system.rhs);
  if (bnorm > 0.0 && resid > 1e-13 * bnorm) {
    // One step of iterative refinement.
    const int m = a.size();
    std::vector<double> r(m);
    for (int i = 0; i < m; ++i) {
      double s = system.rhs[i];
      for (int j = 0; j < m; ++j) s -= a(i, j) * x[j];
      r[i] = s;
    }
    const std::vector<double> dx = lu_solve(f, std::move(r));
    for (int i = 0; i < m; ++i) x[i] += dx[i];
    resid = residual_norm(a, x, system.rhs);
  }

  SolveResult result;
  result.diagnostics.relative_residual = (bnorm > 0.0) ? resid / bnorm : 0.0;
  result.diagnostics.condition_estimate = condition_estimate(a, f);
  result.diagnostics.min_pivot = f.min_pivot;
  result.diagnostics.growth = f.growth;
  const int n = system.field_count;
  result.d.assign(x.begin(), x.begin() + n);
  result.q.assign(x.begin() + n, x.end());
  return result;
}

}  // namespace igabem
