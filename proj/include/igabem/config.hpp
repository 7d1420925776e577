#ifndef IGABEM_CONFIG_HPP
#define IGABEM_CONFIG_HPP

#include <string>
#include <vector>

#include "igabem/geometry.hpp"

namespace igabem {

// Parsed form of the plain-text case files (nested key-value sections, '#'
// comments). See docs/config_format.md for the schema.
struct GeometryConfig {
  std::string preset;  // segment | circular_arc | ellipse_arc | custom_file
  Vec2 tip_a{}, tip_b{};
  Vec2 center{};
  double radius = 1.0;
  double angle_start = 0.0, angle_end = 0.0;
  double semi_x = 1.0, semi_y = 1.0;
  double param_start = 0.0, param_end = 0.0;
  double arc_length = 0.0;  // > 0: solve a symmetric parametric range
  std::string file;
};

struct MeshConfig {
  int elements = 50;
  int degree = 2;
  bool graded = true;
  double grading_ratio = 1.2;
};

struct MaterialConfig {
  double shear_modulus = 2.0;  // GPa
  double poisson = 0.35;
};

struct SurfaceConfig {
  bool dimensionless = true;
  double gamma = 0.0;
  double sigma0_tilde = 0.0;
  double mu_s = 0.0, lambda_s = 0.0, sigma0 = 0.0;  // N/m
};

struct LoadConfig {
  bool dimensionless = true;
  double s11 = 0.0, s12 = 0.0, s22 = 0.0;  // GPa or remote stress / mu
};

struct QuadratureConfig {
  int regular_order = 200;
  int singular_order = 32;
  double delta_fraction = 1.0;
  int field_order = 64;
};

struct OutputConfig {
  int profile_samples = 400;
  bool field_grid = false;
  int grid_nx = 201;
  int grid_ny = 201;
  double grid_halfwidth = 0.0;  // 0 = auto, 2 * half-length
  std::vector<double> radial_angles;
  double radial_r_min = 0.0;
  double radial_r_max = 0.0;
  int radial_samples = 200;
};

struct CaseConfig {
  std::string name = "case";
  GeometryConfig geometry;
  MeshConfig mesh;
  MaterialConfig material;
  SurfaceConfig surface;
  LoadConfig load;
  QuadratureConfig quadrature;
  OutputConfig output;
};

CaseConfig parse_case_config(const std::string& text);
CaseConfig load_case_config(const std::string& path, std::string* raw_text = nullptr);
// Inverse of parse_case_config; round-trips through the manifest.
std::string format_case_config(const CaseConfig& config);

}  // namespace igabem

#endif
