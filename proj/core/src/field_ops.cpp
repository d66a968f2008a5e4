#include "fch/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fch {
namespace {
constexpr double kPi = std::numbers::pi;
}

TubeField signed_distance_field(const Grid2D& grid, const CurveSamples& curve,
                                double reach) {
  TubeField tf;
  tf.r.assign(grid.size(), 0.0);
  tf.inside.assign(grid.size(), 0);
  const int n = grid.n;
  const double margin = 2.0 * 2.0 * kPi * curve.R0 / curve.M;
  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.x(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = grid.x(ix);
      // coarse distance to the sample polyline
      double d2min = std::numeric_limits<double>::max();
      for (int k = 0; k < curve.M; ++k) {
        const double dx = x - curve.x[k], dy = y - curve.y[k];
        const double d2 = dx * dx + dy * dy;
        if (d2 < d2min) d2min = d2;
      }
      if (std::sqrt(d2min) > reach + margin) continue;
      const auto fp = signed_distance(curve, {x, y}, reach);
      if (!fp) continue;
      const size_t idx = static_cast<size_t>(iy) * n + ix;
      tf.r[idx] = fp->r;
      tf.inside[idx] = 1;
    }
  }
  return tf;
}

double cutoff_chi(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double s = t - 1.0;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

Field2D dress_from_distance(const Grid2D& grid, const TubeField& tube,
                            const UniformInterp& profile, double far_value,
                            double eps, double ell) {
  Field2D out(grid, far_value);
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!tube.inside[i]) continue;
    const double z = tube.r[i] / eps;
    const double chi = cutoff_chi(std::abs(tube.r[i]) / ell);
    if (chi == 0.0) continue;
    out.v[i] = profile(z) * chi + far_value * (1.0 - chi);
  }
  return out;
}

Field2D dress(const Grid2D& grid, const CurveSamples& curve,
              const UniformInterp& profile, double far_value, double eps,
              double ell) {
  const TubeField tube = signed_distance_field(grid, curve, 2.0 * ell);
  return dress_from_distance(grid, tube, profile, far_value, eps, ell);
}

double default_ell(const CurveSamples& curve, const Grid2D& grid) {
  double rad_max = 0.0;
  for (int i = 0; i < curve.M; ++i)
    rad_max = std::max(rad_max, std::hypot(curve.x[i], curve.y[i]));
  const double margin = 4.0 * grid.dx();
  const double room = 0.5 * (grid.half_width - rad_max - margin);
  return std::max(1e-3, std::min({0.5 * curve.R0, room, curve.reach_estimate()}));
}

Field2D synthesize_bilayer(const Grid2D& grid, const CurveSamples& curve,
                           const ProfileFamily& fam, double sigma, double eps,
                           double ell) {
  const double h = fam.base.dz();
  const double z0 = fam.base.z.front();
  const UniformInterp phi0_interp(z0, h, fam.base.phi0);
  const TubeField tube = signed_distance_field(grid, curve, 2.0 * ell);
  Field2D u = dress_from_distance(grid, tube, phi0_interp, fam.base.far_field,
                                  eps, ell);
  std::vector<double> phi1_samples(fam.b2.size());
  for (size_t i = 0; i < phi1_samples.size(); ++i)
    phi1_samples[i] = sigma * fam.b2[i] + fam.eta_d * fam.tilt_correction[i];
  const double phi1_far = sigma * fam.consts.b2_far;
  const UniformInterp phi1_interp(z0, h, phi1_samples);
  const Field2D u1 =
      dress_from_distance(grid, tube, phi1_interp, phi1_far, eps, ell);
  for (size_t i = 0; i < u.v.size(); ++i) u.v[i] += eps * u1.v[i];
  return u;
}

double c0_constant(const ScalarConstants& c, double domain_area, double eps,
                   double base_length) {
  const double b2_bar = c.b2_far * domain_area + eps * c.b2_excess * base_length;
  return 2.0 * kPi * c.m0 * c.m0 / (b2_bar * c.m1 * c.m1);
}

double sigma0_constant(const ScalarConstants& c, double M0, double base_length,
                       double domain_area) {
  return (M0 - c.m0 * base_length) / (c.b2_far * domain_area);
}

SigmaSolve sigma_of_p(const Grid2D& grid, const CurveSamples& curve,
                      const ProfileFamily& fam, double M0, double eps,
                      double ell) {
  SigmaSolve out;
  const double base_length = 2.0 * kPi * curve.R0;
  out.admissible = std::abs(M0 - fam.consts.m0 * base_length) <=
                   std::max(10.0, 0.5 * fam.consts.m0 * base_length);
  out.sigma0 = sigma0_constant(fam.consts, M0, base_length, grid.area());
  out.c0 = c0_constant(fam.consts, grid.area(), eps, base_length);
  out.sigma_leading =
      out.sigma0 - out.c0 * fam.consts.m1 * fam.consts.m1 * curve.R0 *
                       curve.p.p0 / fam.consts.m0;

  // Phi(sigma) is affine in sigma: Phi = base + sigma * eps * dress(B2).
  const double h = fam.base.dz();
  const double z0 = fam.base.z.front();
  const TubeField tube = signed_distance_field(grid, curve, 2.0 * ell);
  const UniformInterp phi0_interp(z0, h, fam.base.phi0);
  std::vector<double> tilt(fam.tilt_correction.size());
  for (size_t i = 0; i < tilt.size(); ++i)
    tilt[i] = fam.eta_d * fam.tilt_correction[i];
  const UniformInterp tilt_interp(z0, h, tilt);
  const UniformInterp b2_interp(z0, h, fam.b2);

  const Field2D base0 = dress_from_distance(grid, tube, phi0_interp,
                                            fam.base.far_field, eps, ell);
  const Field2D base1 = dress_from_distance(grid, tube, tilt_interp, 0.0, eps, ell);
  const Field2D slope = dress_from_distance(grid, tube, b2_interp,
                                            fam.consts.b2_far, eps, ell);
  double a = 0.0, b = 0.0;
  for (size_t i = 0; i < base0.v.size(); ++i) {
    a += base0.v[i] - fam.base.far_field + eps * base1.v[i];
    b += eps * slope.v[i];
  }
  const double npts = static_cast<double>(base0.v.size());
  a /= npts;
  b /= npts;
  if (std::abs(b) < 1e-14)
    throw std::runtime_error("sigma_of_p: degenerate slope in the mass equation");
  out.sigma_grid = (eps * M0 / grid.area() - a) / b;
  return out;
}

Field2D chemical_potential(const Spectral2D& sp, const Field2D& u,
                           const WellSpec& well, double eps, double eta1,
                           double eta2) {
  const double e2 = eps * eps;
  const Field2D lap_u = sp.laplacian(u);
  Field2D v(u.grid);
  for (size_t i = 0; i < u.v.size(); ++i)
    v.v[i] = e2 * lap_u.v[i] - eval_well(well, u.v[i], 1);
  const Field2D lap_v = sp.laplacian(v);
  Field2D out(u.grid);
  for (size_t i = 0; i < u.v.size(); ++i) {
    out.v[i] = e2 * lap_v.v[i] - eval_well(well, u.v[i], 2) * v.v[i] +
               eps * (eta1 * e2 * lap_u.v[i] - eta2 * eval_well(well, u.v[i], 1));
  }
  return out;
}

double fch_energy(const Spectral2D& sp, const Field2D& u, const WellSpec& well,
                  double eps, double eta1, double eta2) {
  const Field2D lap_u = sp.laplacian(u);
  const Field2D ux = sp.grad_x(u);
  const Field2D uy = sp.grad_y(u);
  const double ie2 = 1.0 / (eps * eps);
  double acc = 0.0;
  for (size_t i = 0; i < u.v.size(); ++i) {
    const double g = lap_u.v[i] - ie2 * eval_well(well, u.v[i], 1);
    const double grad2 = ux.v[i] * ux.v[i] + uy.v[i] * uy.v[i];
    acc += 0.5 * eps * g * g - 0.5 * eta1 * grad2 -
           eta2 * ie2 * eval_well(well, u.v[i], 0);
  }
  const double dx = u.grid.dx();
  return acc * dx * dx;
}

Field2D zero_mass_projection(const Field2D& f) {
  Field2D out = f;
  const double m = f.mean();
  for (double& x : out.v) x -= m;
  return out;
}

}  // namespace fch
