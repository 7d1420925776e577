#ifndef IGABEM_STUDY_HPP
#define IGABEM_STUDY_HPP

#include <string>
#include <vector>

#include "igabem/config.hpp"
#include "igabem/fields.hpp"

namespace igabem {

// Dimensionless surface description: gamma = 2 mu l / (2 mu_s + lambda_s),
// sigma0_tilde = sigma0 / (mu l), with l the reference half-length.
struct SurfaceNondim {
  double gamma = 0.0;
  double sigma0_tilde = 0.0;
};

// gamma = 0 means infinite stiffness and is rejected.
SurfaceMaterial nondimensionalize(const SurfaceNondim& params, double shear_modulus,
                                  double ref_length);
SurfaceNondim redimensionalize(const SurfaceMaterial& surface, double shear_modulus,
                               double ref_length);

// Case resolved to dimensional solver inputs. The reference half-length is
// half the total arc length of the built geometry.
struct ResolvedCase {
  CaseConfig config;
  std::string config_text;
  Problem problem;
  double half_length = 0.0;

  double sigma_s_scale() const { return problem.bulk.shear_modulus * half_length; }
  double stress_scale() const { return problem.bulk.shear_modulus; }
};

NurbsCurve build_geometry(const GeometryConfig& geometry, const MeshConfig& mesh);
ResolvedCase resolve_case(const CaseConfig& config, std::string config_text = {});

// Built-in study configurations.
CaseConfig benchmark1_config();        // straight segment validation case
CaseConfig benchmark2_config();        // circular arc validation case
CaseConfig benchmark2_fields_config(); // arc with radial stress scans
CaseConfig curvature_case_config(int which /* 1..4 */);
CaseConfig builtin_config(const std::string& name);
std::vector<std::string> builtin_config_names();

// Solve one case and write profile/grid/scan CSVs plus the run manifest under
// out_dir/<name>/. Returns the manifest path.
std::string run_case(const CaseConfig& config, const std::string& out_dir,
                     std::string config_text = {});

// Extract the embedded config from a run manifest for bit-identical reruns.
CaseConfig config_from_manifest(const std::string& manifest_path, std::string* raw_text = nullptr);

struct ConvergenceReport {
  std::vector<int> ladder;          // element counts
  std::vector<int> dofs;            // control points per field
  std::vector<double> error_sigma;  // relative L2 against the reference mesh
  std::vector<double> error_omega;
  int reference_elements = 0;
  int sample_count = 0;
};

ConvergenceReport convergence_study(const CaseConfig& config, const std::vector<int>& ladder,
                                    int reference_elements, int sample_count = 200);
void write_convergence_csv(const ConvergenceReport& report, const std::string& path);

// The four-case curvature comparison; writes per-case artifacts and a
// combined profile CSV. Returns the combined CSV path.
std::string curvature_study(const std::string& out_dir);

}  // namespace igabem

#endif
