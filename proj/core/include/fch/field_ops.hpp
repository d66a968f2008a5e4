#pragma once

#include <span>
#include <vector>

#include "fch/curve.hpp"
#include "fch/numerics.hpp"
#include "fch/profile.hpp"
#include "fch/spectral.hpp"
#include "fch/well.hpp"

namespace fch {

// Signed distance to the curve within a tubular band; outside points flagged.
struct TubeField {
  std::vector<double> r;
  std::vector<uint8_t> inside;
};
TubeField signed_distance_field(const Grid2D& grid, const CurveSamples& curve,
                                double reach);

// Cubic smoothstep cutoff: 1 for t <= 1, 0 for t >= 2.
double cutoff_chi(double t);

// f^d(x) = f(z_p) chi(eps |z_p| / ell) + f_inf (1 - chi), z_p = r / eps.
Field2D dress(const Grid2D& grid, const CurveSamples& curve,
              const UniformInterp& profile, double far_value, double eps,
              double ell);
Field2D dress_from_distance(const Grid2D& grid, const TubeField& tube,
                            const UniformInterp& profile, double far_value,
                            double eps, double ell);

// Default tube half-width: keeps the band inside the domain and the reach.
double default_ell(const CurveSamples& curve, const Grid2D& grid);

// Phi = dress(phi0, b-) + eps dress(phi1(sigma), sigma / W''(b-)^2).
Field2D synthesize_bilayer(const Grid2D& grid, const CurveSamples& curve,
                           const ProfileFamily& fam, double sigma, double eps,
                           double ell);

struct SigmaSolve {
  double sigma_grid = 0.0;     // exact on-grid solution of the mass constraint
  double sigma_leading = 0.0;  // sigma0 - c0 m1^2 R0 p0 / m0
  double sigma0 = 0.0;
  double c0 = 0.0;
  bool admissible = true;
};
// Solves <Phi_p(sigma) - b-> = eps M0 / |Omega| for sigma (affine in sigma).
SigmaSolve sigma_of_p(const Grid2D& grid, const CurveSamples& curve,
                      const ProfileFamily& fam, double M0, double eps,
                      double ell);

// F(u) = (eps^2 Lap - W''(u))(eps^2 Lap u - W'(u)) + eps (eta1 eps^2 Lap u - eta2 W'(u)).
Field2D chemical_potential(const Spectral2D& sp, const Field2D& u,
                           const WellSpec& well, double eps, double eta1,
                           double eta2);

// F(u) = int eps/2 (Lap u - W'(u)/eps^2)^2 - eta1/2 |grad u|^2 - eta2 W(u)/eps^2.
double fch_energy(const Spectral2D& sp, const Field2D& u, const WellSpec& well,
                  double eps, double eta1, double eta2);

Field2D zero_mass_projection(const Field2D& f);

// Leading-order constants entering the slaving relation.
double c0_constant(const ScalarConstants& c, double domain_area, double eps,
                   double base_length);
double sigma0_constant(const ScalarConstants& c, double M0, double base_length,
                       double domain_area);

}  // namespace fch
