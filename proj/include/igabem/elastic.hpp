#ifndef IGABEM_ELASTIC_HPP
#define IGABEM_ELASTIC_HPP

#include "igabem/geometry.hpp"
#include "igabem/nurbs.hpp"

namespace igabem {

// Kernel evaluations refuse separations below this (in length units, nm).
inline constexpr double kCoincidenceGuard = 1e-12;

// Isotropic bulk under plane strain. Units: GPa for the modulus.
struct BulkMaterial {
  double shear_modulus = 1.0;
  double poisson = 0.0;

  double kappa() const { return 3.0 - 4.0 * poisson; }
  // Lame lambda written via kappa, as it enters the stress recovery.
  double lame_lambda() const {
    const double k = kappa();
    return (3.0 - k) * shear_modulus / (k - 1.0);
  }
};

void validate(const BulkMaterial& bulk);

// Membrane constants, all N/m (numerically equal to GPa*nm).
struct SurfaceMaterial {
  double mu_s = 0.0;
  double lambda_s = 0.0;
  double surface_tension = 0.0;

  // The only stiffness combination entering the constitutive line.
  double stiffness() const { return lambda_s + 2.0 * mu_s; }
};

void validate(const SurfaceMaterial& surface);

// Uniform remote stress (GPa, or dimensionless when the harness says so).
struct FarFieldLoad {
  double s11 = 0.0;
  double s12 = 0.0;
  double s22 = 0.0;
};

// Point-force displacement influence in the infinite plane:
// G_kj = [-kappa d_kj ln r + r_,k r_,j] / (2 pi mu (kappa+1)).
Mat2 kelvin(Vec2 x, Vec2 y, const BulkMaterial& bulk);

// dG_kj/dx_i, closed form; used for off-surface stress recovery.
struct KelvinGradient {
  double d[2][2][2] = {};  // [k][j][i]
};
KelvinGradient kelvin_gradient(Vec2 x, Vec2 y, const BulkMaterial& bulk);

// Linear displacement field of the remote load and its constant gradient.
Vec2 farfield_displacement(const FarFieldLoad& load, const BulkMaterial& bulk, Vec2 x);
Mat2 farfield_displacement_gradient(const FarFieldLoad& load, const BulkMaterial& bulk);

// Cartesian components of the remote displacement gradient projected on the
// local tangent: sigma1 = du1_inf/ds, sigma2 = du2_inf/ds at normal angle beta0.
struct SigmaPair {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};
SigmaPair farfield_rhs_sigma(const FarFieldLoad& load, const BulkMaterial& bulk, double beta0);

// The three angular kernels of the surface-derivative representation,
// evaluated with r = y - y0 and the normal angle beta0 at the source point.
struct KernelEval {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double r = 0.0;
};
KernelEval phi_kernels(const LocalFrame& frame0, Vec2 y);

/* Source-point behavior of the angular kernels along the curve. With
   r = C(xi) - C(xi0), only phi1 is Cauchy singular:

     (xi - xi0) * D(xi) * phi1(xi)  ->  D(xi0) / J1(xi0)

   for any smooth scalar density D, while phi2 and phi3 stay bounded with
   curvature-proportional limits (their numerators carry a normal projection
   of order r^2). */
double phi1_cauchy_strength(const LocalFrame& source, double density_at_source);
double phi2_source_limit(const LocalFrame& source);
double phi3_source_limit(const LocalFrame& source);

// Traction jump across the membrane: local components from the surface stress
// state, plus their Cartesian images g1, g2.
struct TractionJump {
  double jump_l = 0.0;  // tangential
  double jump_n = 0.0;  // normal
  double g1 = 0.0;
  double g2 = 0.0;
};
TractionJump density_g(const LocalFrame& frame, double sigma_s, double omega_s,
                       double dsigma_ds, double domega_ds, double sigma0);

// Plane-strain Hooke's law from the (symmetric) strain tensor.
Mat2 stress_from_strain(const Mat2& strain, const BulkMaterial& bulk);

}  // namespace igabem

#endif
