#pragma once

#include <span>
#include <string>
#include <vector>

#include "fch/well.hpp"

namespace fch {

// 1D homoclinic bilayer profile on a symmetric truncated line [-Lz, Lz].
struct Profile1D {
  std::vector<double> z;
  std::vector<double> phi0;
  std::vector<double> phi0_prime;
  double far_field = 0.0;     // b_minus
  double turning_point = 0.0; // phi0(0)
  double half_width = 0.0;    // Lz
  double dz() const { return z.size() > 1 ? z[1] - z[0] : 0.0; }
};

// phi0 by quadrature of the first integral dz = dphi / sqrt(2 W(phi)),
// inverse-sqrt singularity at u* removed by phi = u* - s^2, reflected to
// z < 0 and resampled onto the uniform grid by monotone Hermite
// interpolation with the exact slopes phi' = -sqrt(2 W(phi)).
// n is rounded up to odd so the grid contains z = 0.
Profile1D build_phi0(const WellSpec& spec, double half_width, int n);

// Default truncation: tail below ~1e-5 of the jump there; constants that need
// tighter tails pass a larger multiple explicitly.
double default_half_width(const WellSpec& spec);

// L0 = -d_zz + W''(phi0(z)), 2nd-order central differences, far-field
// potential W''(b_minus) at both ends; solves act on the deviation from the
// far-field constant with zero Dirichlet ends.
struct LineOperator {
  std::vector<double> z;
  std::vector<double> potential;  // W''(phi0(z_i))
  double h = 0.0;
  double far_potential = 0.0;     // W''(b_minus)
  std::vector<double> kernel;     // discrete near-kernel vector (~ phi0'), odd,
                                  // normalized in L2(h)
};

LineOperator build_line_operator(const WellSpec& spec, const Profile1D& p);

// A u with u treated as a decaying deviation (zero beyond the ends).
std::vector<double> apply_l0(const LineOperator& L, std::span<const double> u);

struct GroundState {
  double lambda0 = 0.0;
  std::vector<double> psi0;  // L2(h)-normalized, positive
  int iterations = 0;
};
// Smallest eigenpair by shifted inverse iteration with Rayleigh refinement.
GroundState ground_state(const LineOperator& L);

// Eigenvalue counting by Sturm sequence; used as an independent test oracle.
int count_eigenvalues_below(const LineOperator& L, double x);
double smallest_eigenvalue_bisection(const LineOperator& L, double lo, double hi,
                                     double tol = 1e-12);

struct SolveReport {
  double kernel_projection = 0.0;  // magnitude removed from the input
  bool projected = false;
};

// L0^{-powers} f for f orthogonal to the kernel (projected out otherwise and
// recorded). Far-field value of the solution: f_inf / W''(b_minus) each power.
std::vector<double> solve_l0(const LineOperator& L, std::span<const double> f,
                             int powers, SolveReport* report = nullptr);

struct ScalarConstants {
  double m0 = 0.0;           // bilayer mass per unit length
  double m1 = 0.0;           // ||phi0'||_{L2}
  double m2 = 0.0;           // (1/2) int L0^{-1}(z phi0') dz
  double m3 = 0.0;           // (1/2) int |z phi0'|^2 dz
  double lambda0 = 0.0;      // ground state eigenvalue, < 0
  double b2_far = 0.0;       // B2 far field = W''(b_minus)^{-2}
  double b2_excess = 0.0;    // int (B2 - b2_far) dz, per unit curve length
  double sigma1_star = 0.0;  // -(eta1+eta2) m1^2 / (2 m0)
  double w2_bminus = 0.0;    // W''(b_minus)
};

// m0, m1, m3 by quadrature; m2 and lambda0 left zero (filled by
// build_constants, which owns the solves).
ScalarConstants moments(const Profile1D& p);

ScalarConstants build_constants(const Profile1D& p, const LineOperator& L,
                                double eta1, double eta2);

// phi1(z; sigma) = sigma B2 + (eta_d / 2) L0^{-1}(z phi0'), eta_d = eta1 - eta2.
std::vector<double> phi1_profile(const ScalarConstants& c, const LineOperator& L,
                                 const Profile1D& p, double sigma, double eta_d);

struct PearlingCheck {
  double lhs = 0.0;
  bool stable = false;
};
// sigma1* S1 + eta_d lambda0 > 0 renders the pearling modes linearly stable.
PearlingCheck pearling_check(const ScalarConstants& c, double S1, double eta_d);

// Bundle used by the 2D synthesis: base profile plus the solved 1D profiles.
struct ProfileFamily {
  WellSpec well;
  double eta1 = 0.0, eta2 = 0.0;
  double eta_d = 0.0;  // eta1 - eta2
  Profile1D base;
  LineOperator op;
  ScalarConstants consts;
  std::vector<double> b2;               // L0^{-2} 1
  std::vector<double> tilt_correction;  // (1/2) L0^{-1}(z phi0'), even in z
};
ProfileFamily build_profile_family(const WellSpec& spec, double eta1, double eta2,
                                   double half_width = 0.0, int n = 4097);

}  // namespace fch
