#include "igabem/study.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "igabem/csvio.hpp"
#include "igabem/errors.hpp"
#include "igabem/presets.hpp"

namespace igabem {

namespace fs = std::filesystem;
using nlohmann::json;

SurfaceMaterial nondimensionalize(const SurfaceNondim& params, double shear_modulus,
                                  double ref_length) {
  if (!(params.gamma > 0.0)) {
    throw config_error("gamma must be > 0 (gamma = 0 would mean infinite surface stiffness)");
  }
  SurfaceMaterial surface;
  surface.mu_s = shear_modulus * ref_length / params.gamma;  // stiffness carried as 2 mu_s
  surface.lambda_s = 0.0;
  surface.surface_tension = params.sigma0_tilde * shear_modulus * ref_length;
  return surface;
}

SurfaceNondim redimensionalize(const SurfaceMaterial& surface, double shear_modulus,
                               double ref_length) {
  if (!(surface.stiffness() > 0.0)) {
    throw config_error("cannot express a zero-stiffness surface dimensionlessly");
  }
  SurfaceNondim params;
  params.gamma = 2.0 * shear_modulus * ref_length / surface.stiffness();
  params.sigma0_tilde = surface.surface_tension / (shear_modulus * ref_length);
  return params;
}

NurbsCurve build_geometry(const GeometryConfig& geometry, const MeshConfig& mesh) {
  MeshSpec spec{mesh.elements, mesh.degree, mesh.graded, mesh.grading_ratio};
  if (geometry.preset == "segment") {
    return segment_curve(geometry.tip_a, geometry.tip_b, spec);
  }
  if (geometry.preset == "circular_arc") {
    return circular_arc_curve(geometry.center, geometry.radius, geometry.angle_start,
                              geometry.angle_end, spec);
  }
  if (geometry.preset == "ellipse_arc") {
    double t_a = geometry.param_start, t_b = geometry.param_end;
    if (geometry.arc_length > 0.0) {
      t_a = ellipse_angle_for_arc_length(geometry.semi_x, geometry.semi_y, geometry.arc_length);
      t_b = M_PI - t_a;
    }
    return ellipse_arc_curve(geometry.center, geometry.semi_x, geometry.semi_y, t_a, t_b, spec);
  }
  if (geometry.preset == "custom_file") {
    return load_curve_file(geometry.file);
  }
  throw config_error("unknown geometry preset: '" + geometry.preset + "'");
}

ResolvedCase resolve_case(const CaseConfig& config, std::string config_text) {
  NurbsCurve curve = build_geometry(config.geometry, config.mesh);
  const double half_length = 0.5 * curve.total_length();

  const BulkMaterial bulk{config.material.shear_modulus, config.material.poisson};
  SurfaceMaterial surface;
  if (config.surface.dimensionless) {
    surface = nondimensionalize({config.surface.gamma, config.surface.sigma0_tilde},
                                bulk.shear_modulus, half_length);
  } else {
    surface = SurfaceMaterial{config.surface.mu_s, config.surface.lambda_s, config.surface.sigma0};
  }
  FarFieldLoad load{config.load.s11, config.load.s12, config.load.s22};
  if (config.load.dimensionless) {
    load.s11 *= bulk.shear_modulus;
    load.s12 *= bulk.shear_modulus;
    load.s22 *= bulk.shear_modulus;
  }

  AssemblyOptions options;
  options.regular_order = config.quadrature.regular_order;
  options.singular.gauss_order_singular = config.quadrature.singular_order;
  options.singular.delta_fraction = config.quadrature.delta_fraction;
  options.parallelism = Parallelism::kOpenMP;

  ElementMesh mesh = make_mesh(curve);
  return ResolvedCase{config,
                      config_text.empty() ? format_case_config(config) : std::move(config_text),
                      Problem{std::move(curve), std::move(mesh), bulk, surface, load, options},
                      half_length};
}

CaseConfig benchmark1_config() {
  CaseConfig cfg;
  cfg.name = "benchmark1";
  cfg.mesh.grading_ratio = 1.1;
  cfg.geometry.preset = "segment";
  cfg.geometry.tip_a = {5.0, 0.0};
  cfg.geometry.tip_b = {-5.0, 0.0};
  cfg.material = {2.0, 0.35};
  cfg.surface.dimensionless = true;
  cfg.surface.gamma = 0.12;
  cfg.surface.sigma0_tilde = 0.025;
  cfg.load.dimensionless = true;
  cfg.load.s11 = 0.05;
  return cfg;
}

CaseConfig benchmark2_config() {
  CaseConfig cfg;
  cfg.name = "benchmark2";
  cfg.mesh.grading_ratio = 1.1;
  cfg.geometry.preset = "circular_arc";
  cfg.geometry.center = {0.0, 0.0};
  cfg.geometry.radius = 1.0;
  cfg.geometry.angle_start = 0.25 * M_PI;
  cfg.geometry.angle_end = 0.75 * M_PI;
  cfg.material = {1.0, 0.33};
  cfg.surface.dimensionless = true;
  cfg.surface.gamma = 1.0;
  cfg.surface.sigma0_tilde = 0.01;
  cfg.load.dimensionless = true;
  cfg.load.s22 = 1.0;
  return cfg;
}

CaseConfig benchmark2_fields_config() {
  CaseConfig cfg;
  cfg.name = "benchmark2_fields";
  cfg.mesh.grading_ratio = 1.1;
  cfg.geometry.preset = "circular_arc";
  cfg.geometry.center = {0.0, 0.0};
  cfg.geometry.radius = 5.0;
  cfg.geometry.angle_start = 0.25 * M_PI;
  cfg.geometry.angle_end = 0.75 * M_PI;
  cfg.material = {2.0, 0.35};
  cfg.surface.dimensionless = true;
  cfg.surface.gamma = 0.12;
  cfg.surface.sigma0_tilde = 0.025;
  cfg.load.dimensionless = true;
  cfg.load.s22 = 0.05;
  cfg.output.radial_angles = {0.375 * M_PI, 0.5 * M_PI};
  cfg.output.radial_r_min = 0.25;
  cfg.output.radial_r_max = 20.0;
  cfg.output.radial_samples = 200;
  return cfg;
}

CaseConfig curvature_case_config(int which) {
  CaseConfig cfg;
  cfg.material = {2.0, 0.35};
  cfg.surface.dimensionless = true;
  cfg.surface.gamma = 0.12;
  cfg.surface.sigma0_tilde = 0.025;
  cfg.load.dimensionless = true;
  cfg.load.s22 = 0.05;
  cfg.mesh.grading_ratio = 1.1;
  cfg.output.field_grid = true;
  switch (which) {
    case 1:
      cfg.name = "curvature_i";
      cfg.geometry.preset = "segment";
      cfg.geometry.tip_a = {0.5 * M_PI, 0.0};
      cfg.geometry.tip_b = {-0.5 * M_PI, 0.0};
      break;
    case 2:
      cfg.name = "curvature_ii";
      cfg.geometry.preset = "ellipse_arc";
      cfg.geometry.semi_x = 2.0;
      cfg.geometry.semi_y = 1.0;
      cfg.geometry.arc_length = M_PI;
      break;
    case 3:
      cfg.name = "curvature_iii";
      cfg.geometry.preset = "circular_arc";
      cfg.geometry.radius = 2.0;
      cfg.geometry.angle_start = 0.25 * M_PI;
      cfg.geometry.angle_end = 0.75 * M_PI;
      break;
    case 4:
      cfg.name = "curvature_iv";
      cfg.geometry.preset = "ellipse_arc";
      cfg.geometry.semi_x = 2.0;
      cfg.geometry.semi_y = 4.0;
      cfg.geometry.arc_length = M_PI;
      break;
    default:
      throw config_error("curvature case index must be 1..4");
  }
  return cfg;
}

std::vector<std::string> builtin_config_names() {
  return {"benchmark1", "benchmark2",   "benchmark2_fields",
          "curvature_i", "curvature_ii", "curvature_iii", "curvature_iv"};
}

CaseConfig builtin_config(const std::string& name) {
  if (name == "benchmark1") return benchmark1_config();
  if (name == "benchmark2") return benchmark2_config();
  if (name == "benchmark2_fields") return benchmark2_fields_config();
  if (name == "curvature_i") return curvature_case_config(1);
  if (name == "curvature_ii") return curvature_case_config(2);
  if (name == "curvature_iii") return curvature_case_config(3);
  if (name == "curvature_iv") return curvature_case_config(4);
  throw config_error("unknown builtin config '" + name + "'");
}

namespace {

// Arc-length-weighted centroid, with tiny components snapped to zero so the
// default grid axes align with the case's symmetry axes.
Vec2 surface_centroid(const NurbsCurve& curve) {
  const QuadratureRule rule = gauss_legendre(32);
  const auto& kv = curve.knot_vector();
  Vec2 first_moment;
  const auto integ = [&](auto f, double a, double b) {
    return integrate_interval(f, a, b, rule);
  };
  const auto& knots = kv.knots();
  for (std::size_t i = kv.degree(); i + kv.degree() + 1 < knots.size(); ++i) {
    if (!(knots[i] < knots[i + 1])) continue;
    first_moment.x += integ(
        [&](double t) { const auto j = curve.eval(t); return j.p.x * j.d1.norm(); },
        knots[i], knots[i + 1]);
    first_moment.y += integ(
        [&](double t) { const auto j = curve.eval(t); return j.p.y * j.d1.norm(); },
        knots[i], knots[i + 1]);
  }
  Vec2 c = first_moment / curve.total_length();
  const double snap = 1e-9 * curve.length_scale();
  if (std::abs(c.x) < snap) c.x = 0.0;
  if (std::abs(c.y) < snap) c.y = 0.0;
  return c;
}

double xi_at_arc_fraction(const NurbsCurve& curve, double fraction) {
  const double target = fraction * curve.total_length();
  double lo = curve.knot_vector().domain_begin();
  double hi = curve.knot_vector().domain_end();
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (curve.arc_length(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct RunArtifacts {
  std::string manifest_path;
  std::vector<std::string> files;
};

RunArtifacts run_case_impl(const ResolvedCase& rc, const SurfaceSolution& sol,
                           const std::string& out_dir) {
  const CaseConfig& cfg = rc.config;
  const fs::path dir = fs::path(out_dir) / cfg.name;
  fs::create_directories(dir);

  RunArtifacts artifacts;
  const NurbsCurve& curve = sol.curve();
  const double lo = curve.knot_vector().domain_begin();
  const double hi = curve.knot_vector().domain_end();
  const double sigma_scale = rc.sigma_s_scale();
  const double stress_scale = rc.stress_scale();

  {
    const fs::path path = dir / "profile.csv";
    CsvWriter csv(path.string(),
                  {"s_tilde", "xi", "x1", "x2", "sigma_s_tilde", "omega_s", "dt_l", "dt_n"});
    const int count = std::max(2, cfg.output.profile_samples);
    for (int i = 0; i < count; ++i) {
      const double xi = lo + (hi - lo) * i / (count - 1.0);
      const SurfaceFieldSample s = surface_fields(sol, xi);
      csv.row({s.s_tilde, s.xi, s.point.x, s.point.y, s.sigma_s / sigma_scale, s.omega_s,
               s.jump_l, s.jump_n});
    }
    artifacts.files.push_back(path.filename().string());
  }

  const bool wants_fields = cfg.output.field_grid || !cfg.output.radial_angles.empty();
  if (wants_fields) {
    const FieldEvaluator fields(sol, cfg.quadrature.field_order);

    if (cfg.output.field_grid) {
      const fs::path path = dir / "field_grid.csv";
      CsvWriter csv(path.string(), {"x1", "x2", "u1", "u2", "s11", "s12", "s22", "s33",
                                    "von_mises", "relative_von_mises"});
      const Vec2 center = surface_centroid(curve);
      const double halfw = (cfg.output.grid_halfwidth > 0.0) ? cfg.output.grid_halfwidth
                                                             : 2.0 * rc.half_length;
      const int nx = std::max(2, cfg.output.grid_nx);
      const int ny = std::max(2, cfg.output.grid_ny);
      std::vector<Vec2> pts(static_cast<std::size_t>(nx) * ny);
      for (int j = 0; j < ny; ++j) {
        const double y = center.y + halfw * (2.0 * j / (ny - 1.0) - 1.0);
        for (int i = 0; i < nx; ++i) {
          const double x = center.x + halfw * (2.0 * i / (nx - 1.0) - 1.0);
          pts[static_cast<std::size_t>(j) * nx + i] = {x, y};
        }
      }
      std::vector<int> ok(pts.size(), 0);
      std::vector<FieldSample> samples(pts.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
      for (long idx = 0; idx < static_cast<long>(pts.size()); ++idx) {
        try {
          samples[idx] = fields.sample(pts[idx]);
          ok[idx] = 1;
        } catch (const near_surface_error&) {
          ok[idx] = 0;
        }
      }
      for (std::size_t idx = 0; idx < pts.size(); ++idx) {
        if (ok[idx]) {
          const FieldSample& f = samples[idx];
          csv.row({pts[idx].x, pts[idx].y, f.u.x, f.u.y, f.stress.xx / stress_scale,
                   f.stress.xy / stress_scale, f.stress.yy / stress_scale, f.s33 / stress_scale,
                   f.von_mises / stress_scale, f.relative_von_mises});
        } else {
          csv.row({pts[idx].x, pts[idx].y, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                   std::nullopt, std::nullopt, std::nullopt, std::nullopt});
        }
      }
      artifacts.files.push_back(path.filename().string());
    }

    for (std::size_t k = 0; k < cfg.output.radial_angles.size(); ++k) {
      const double angle = cfg.output.radial_angles[k];
      fs::path path = dir / ("radial_" + std::to_string(k) + ".csv");
      CsvWriter csv(path.string(), {"r", "x1", "x2", "s11", "s12", "s22", "s33", "von_mises",
                                    "relative_von_mises"});
      const int count = std::max(2, cfg.output.radial_samples);
      for (int i = 0; i < count; ++i) {
        const double r =
            cfg.output.radial_r_min +
            (cfg.output.radial_r_max - cfg.output.radial_r_min) * i / (count - 1.0);
        const Vec2 x{r * std::cos(angle), r * std::sin(angle)};
        try {
          const FieldSample f = fields.sample(x);
          csv.row({r, x.x, x.y, f.stress.xx / stress_scale, f.stress.xy / stress_scale,
                   f.stress.yy / stress_scale, f.s33 / stress_scale, f.von_mises / stress_scale,
                   f.relative_von_mises});
        } catch (const near_surface_error&) {
          csv.row({r, x.x, x.y, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                   std::nullopt, std::nullopt});
        }
      }
      artifacts.files.push_back(path.filename().string());
    }
  }

  json manifest;
  manifest["manifest_version"] = 1;
  manifest["name"] = cfg.name;
  manifest["config_text"] = rc.config_text;
  manifest["csv_schemas"] = {
      {"version", 1},
      {"profile", "s_tilde,xi,x1,x2,sigma_s_tilde,omega_s,dt_l,dt_n"},
      {"field_grid", "x1,x2,u1,u2,s11,s12,s22,s33,von_mises,relative_von_mises"},
      {"radial", "r,x1,x2,s11,s12,s22,s33,von_mises,relative_von_mises"},
  };
  manifest["resolved"] = {
      {"half_length_nm", rc.half_length},
      {"shear_modulus_gpa", rc.problem.bulk.shear_modulus},
      {"poisson", rc.problem.bulk.poisson},
      {"kappa", rc.problem.bulk.kappa()},
      {"surface_stiffness_n_per_m", rc.problem.surface.stiffness()},
      {"surface_tension_n_per_m", rc.problem.surface.surface_tension},
      {"load_gpa", {rc.problem.load.s11, rc.problem.load.s12, rc.problem.load.s22}},
      {"elements", rc.problem.mesh.element_count()},
      {"control_points", rc.problem.curve.control_count()},
      {"degree", rc.problem.curve.degree()},
  };
  manifest["diagnostics"] = {
      {"relative_residual", sol.diagnostics.relative_residual},
      {"condition_estimate", sol.diagnostics.condition_estimate},
      {"min_pivot", sol.diagnostics.min_pivot},
      {"growth", sol.diagnostics.growth},
      {"assembly_seconds", sol.assembly_seconds},
      {"solve_seconds", sol.solve_seconds},
#ifdef _OPENMP
      {"max_threads", omp_get_max_threads()},
#else
      {"max_threads", 1},
#endif
  };
  manifest["outputs"] = artifacts.files;

  const fs::path manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("cannot write manifest: " + manifest_path.string());
  out << manifest.dump(2) << "\n";
  artifacts.manifest_path = manifest_path.string();
  return artifacts;
}

}  // namespace

std::string run_case(const CaseConfig& config, const std::string& out_dir,
                     std::string config_text) {
  const ResolvedCase rc = resolve_case(config, std::move(config_text));
  const SurfaceSolution sol = solve_problem(rc.problem);
  return run_case_impl(rc, sol, out_dir).manifest_path;
}

CaseConfig config_from_manifest(const std::string& manifest_path, std::string* raw_text) {
  std::ifstream in(manifest_path);
  if (!in) throw config_error("cannot open manifest: " + manifest_path);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw config_error(std::string("bad manifest json: ") + e.what());
  }
  if (!manifest.contains("config_text")) {
    throw config_error("manifest has no embedded config");
  }
  const std::string text = manifest["config_text"].get<std::string>();
  if (raw_text) *raw_text = text;
  return parse_case_config(text);
}

ConvergenceReport convergence_study(const CaseConfig& config, const std::vector<int>& ladder,
                                    int reference_elements, int sample_count) {
  if (ladder.empty()) throw config_error("convergence: empty ladder");
  for (int ne : ladder) {
    if (ne > reference_elements) {
      throw config_error("convergence: reference must be at least as fine as the ladder");
    }
  }

  const auto solve_at = [&](int elements) {
    CaseConfig c = config;
    c.mesh.elements = elements;
    const ResolvedCase rc = resolve_case(c);
    return std::make_pair(solve_problem(rc.problem), rc.sigma_s_scale());
  };

  const auto [ref_sol, ref_scale] = solve_at(reference_elements);
  const auto& kv = ref_sol.curve().knot_vector();
  const double lo = kv.domain_begin(), hi = kv.domain_end();

  std::vector<double> xi(sample_count);
  for (int k = 0; k < sample_count; ++k) xi[k] = lo + (hi - lo) * (k + 0.5) / sample_count;

  std::vector<double> ref_sigma(sample_count), ref_omega(sample_count);
  double den_sigma = 0.0, den_omega = 0.0;
  for (int k = 0; k < sample_count; ++k) {
    const SurfaceFieldSample s = surface_fields(ref_sol, xi[k]);
    ref_sigma[k] = s.sigma_s / ref_scale;
    ref_omega[k] = s.omega_s;
    den_sigma += ref_sigma[k] * ref_sigma[k];
    den_omega += ref_omega[k] * ref_omega[k];
  }

  ConvergenceReport report;
  report.reference_elements = reference_elements;
  report.sample_count = sample_count;
  for (int ne : ladder) {
    const auto [sol, scale] = solve_at(ne);
    double num_sigma = 0.0, num_omega = 0.0;
    for (int k = 0; k < sample_count; ++k) {
      const SurfaceFieldSample s = surface_fields(sol, xi[k]);
      const double es = s.sigma_s / scale - ref_sigma[k];
      const double eo = s.omega_s - ref_omega[k];
      num_sigma += es * es;
      num_omega += eo * eo;
    }
    report.ladder.push_back(ne);
    report.dofs.push_back(sol.curve().control_count());
    report.error_sigma.push_back(den_sigma > 0.0 ? std::sqrt(num_sigma / den_sigma) : 0.0);
    report.error_omega.push_back(den_omega > 0.0 ? std::sqrt(num_omega / den_omega) : 0.0);
  }
  return report;
}

void write_convergence_csv(const ConvergenceReport& report, const std::string& path) {
  CsvWriter csv(path, {"elements", "dofs", "error_sigma_tilde", "error_omega"});
  for (std::size_t i = 0; i < report.ladder.size(); ++i) {
    csv.row({static_cast<double>(report.ladder[i]), static_cast<double>(report.dofs[i]),
             report.error_sigma[i], report.error_omega[i]});
  }
}

std::string curvature_study(const std::string& out_dir) {
  std::vector<ResolvedCase> cases;
  std::vector<SurfaceSolution> solutions;
  for (int i = 1; i <= 4; ++i) {
    cases.push_back(resolve_case(curvature_case_config(i)));
    solutions.push_back(solve_problem(cases.back().problem));
    run_case_impl(cases.back(), solutions.back(), out_dir);
  }

  const fs::path combined = fs::path(out_dir) / "curvature_profiles.csv";
  std::vector<std::string> cols = {"s_tilde"};
  for (int i = 1; i <= 4; ++i) {
    cols.push_back("sigma_s_tilde_case" + std::to_string(i));
    cols.push_back("omega_s_case" + std::to_string(i));
  }
  CsvWriter csv(combined.string(), cols);
  const int count = 401;
  for (int k = 0; k < count; ++k) {
    const double fraction = k / (count - 1.0);
    std::vector<std::optional<double>> row = {fraction};
    for (int i = 0; i < 4; ++i) {
      const double xi = xi_at_arc_fraction(solutions[i].curve(), fraction);
      const SurfaceFieldSample s = surface_fields(solutions[i], xi);
      row.push_back(s.sigma_s / cases[i].sigma_s_scale());
      row.push_back(s.omega_s);
    }
    csv.row(row);
  }
  return combined.string();
}

}  // namespace igabem
