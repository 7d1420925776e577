#include "igabem/elastic.hpp"

#include <cmath>

#include "igabem/errors.hpp"

namespace igabem {

void validate(const BulkMaterial& bulk) {
  if (!(bulk.shear_modulus > 0.0)) throw domain_error("bulk material: shear modulus must be > 0");
  if (!(bulk.poisson > -1.0 && bulk.poisson < 0.5)) {
    throw domain_error("bulk material: Poisson ratio must lie in (-1, 0.5)");
  }
}

void validate(const SurfaceMaterial& surface) {
  const double k = surface.stiffness();
  if (k < 0.0) throw domain_error("surface material: lambda_s + 2 mu_s must be >= 0");
  if (k == 0.0 && surface.surface_tension != 0.0) {
    throw domain_error("surface material: zero stiffness requires zero surface tension");
  }
}

Mat2 kelvin(Vec2 x, Vec2 y, const BulkMaterial& bulk) {
  const Vec2 d = x - y;
  const double r = d.norm();
  if (r < kCoincidenceGuard) throw singularity_error("kelvin: coincident points");
  const double kap = bulk.kappa();
  const double scale = 1.0 / (2.0 * M_PI * bulk.shear_modulus * (kap + 1.0));
  const double lr = std::log(r);
  const double rx = d.x / r, ry = d.y / r;
  return Mat2{scale * (-kap * lr + rx * rx), scale * (rx * ry),
              scale * (rx * ry), scale * (-kap * lr + ry * ry)};
}

KelvinGradient kelvin_gradient(Vec2 x, Vec2 y, const BulkMaterial& bulk) {
  const Vec2 d = x - y;
  const double r = d.norm();
  if (r < kCoincidenceGuard) throw singularity_error("kelvin_gradient: coincident points");
  const double kap = bulk.kappa();
  const double scale = 1.0 / (2.0 * M_PI * bulk.shear_modulus * (kap + 1.0) * r);
  const double rd[2] = {d.x / r, d.y / r};

  KelvinGradient g;
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 2; ++i) {
        double v = -kap * (k == j ? rd[i] : 0.0);
        v += (k == i ? rd[j] : 0.0);
        v += (i == j ? rd[k] : 0.0);
        v -= 2.0 * rd[i] * rd[j] * rd[k];
        g.d[k][j][i] = scale * v;
      }
    }
  }
  return g;
}

Mat2 farfield_displacement_gradient(const FarFieldLoad& load, const BulkMaterial& bulk) {
  const double kap = bulk.kappa();
  const double mu = bulk.shear_modulus;
  const double a = ((kap + 1.0) * load.s11 + (kap - 3.0) * load.s22) / (8.0 * mu);
  const double b = load.s12 / (2.0 * mu);
  const double c = ((kap - 3.0) * load.s11 + (kap + 1.0) * load.s22) / (8.0 * mu);
  return Mat2{a, b, b, c};
}

Vec2 farfield_displacement(const FarFieldLoad& load, const BulkMaterial& bulk, Vec2 x) {
  return farfield_displacement_gradient(load, bulk).apply(x);
}

SigmaPair farfield_rhs_sigma(const FarFieldLoad& load, const BulkMaterial& bulk, double beta0) {
  const Mat2 grad = farfield_displacement_gradient(load, bulk);
  const double sb = std::sin(beta0), cb = std::cos(beta0);
  return {-grad.xx * sb + grad.xy * cb, -grad.yx * sb + grad.yy * cb};
}

KernelEval phi_kernels(const LocalFrame& frame0, Vec2 y) {
  KernelEval k;
  const Vec2 d = y - frame0.point;
  k.r1 = d.x;
  k.r2 = d.y;
  const double r2 = d.squared_norm();
  k.r = std::sqrt(r2);
  if (k.r < kCoincidenceGuard) throw singularity_error("phi_kernels: coincident points");
  const double sb = std::sin(frame0.normal_angle), cb = std::cos(frame0.normal_angle);
  const double r4 = r2 * r2;

  k.phi1 = (-k.r1 * sb + k.r2 * cb) / r2;
  k.phi2 = 2.0 * k.r1 * k.r2 * (-k.r2 * sb - k.r1 * cb) / r4;
  k.phi3 = -(k.r2 / r2 - 2.0 * k.r1 * k.r1 * k.r2 / r4) * sb +
           (k.r1 / r2 - 2.0 * k.r1 * k.r2 * k.r2 / r4) * cb;
  return k;
}

double phi1_cauchy_strength(const LocalFrame& source, double density_at_source) {
  return density_at_source / source.jacobian;
}

double phi2_source_limit(const LocalFrame& source) {
  const Vec2 t = source.tangent();
  return t.x * t.y * source.curvature;
}

double phi3_source_limit(const LocalFrame& source) {
  const Vec2 t = source.tangent();
  return -0.5 * (t.x * t.x - t.y * t.y) * source.curvature;
}

TractionJump density_g(const LocalFrame& frame, double sigma_s, double omega_s,
                       double dsigma_ds, double domega_ds, double sigma0) {
  TractionJump t;
  const double inv_r = frame.curvature;
  t.jump_l = dsigma_ds + sigma0 * omega_s * inv_r;
  t.jump_n = -sigma_s * inv_r + sigma0 * domega_ds;
  const double sb = std::sin(frame.normal_angle), cb = std::cos(frame.normal_angle);
  t.g1 = -sb * t.jump_l + cb * t.jump_n;
  t.g2 = cb * t.jump_l + sb * t.jump_n;
  return t;
}

Mat2 stress_from_strain(const Mat2& strain, const BulkMaterial& bulk) {
  const double two_mu = 2.0 * bulk.shear_modulus;
  const double lam_tr = bulk.lame_lambda() * strain.trace();
  return Mat2{two_mu * strain.xx + lam_tr, two_mu * strain.xy,
              two_mu * strain.yx, two_mu * strain.yy + lam_tr};
}

}  // namespace igabem
