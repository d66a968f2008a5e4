#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fch/curve.hpp"
#include "fch/profile.hpp"

namespace fch {

// Slaving closure for sigma(p). LeadingOrder is the affine formula
// sigma0 - c0 m1^2 R0 p0 / m0; MassConsistent solves the dressed-profile mass
// identity M0 = (m0 + eps eta_d m2) |Gamma| + sigma (B2_far |Omega| + eps C3 |Gamma|)
// exactly, which matters when eps C3 |Gamma| is not small against
// B2_far |Omega| (the eps C(p0) p0 correction of the slaving expansion).
enum class SlavingModel { LeadingOrder, MassConsistent };

// Reduced interface dynamics: Galerkin-projected curvature-driven flow with
// the bulk density slaved to the interface length, and its linearized
// meander ODE system.
struct RclConfig {
  double eps = 0.1;
  double eta1 = 1.45;
  double eta2 = 2.0;
  std::optional<double> alpha;  // absent -> 0 everywhere, p0* leading order only
  double M0 = 0.0;
  double R0 = 1.0;
  double domain_half_width = 0.0;  // Omega = [-L, L]^2
  int N1 = 33;
  double dt = 0.0;    // <= 0: auto 0.1 R0^4 / (eps^4 beta_max^4)
  double t_end = 0.0;
  int M = 0;          // curve samples; <= 0: max(8 N1, 256)
  double delta = 0.2; // D_delta budget
  int snapshot_every = 10;
  SlavingModel slaving = SlavingModel::LeadingOrder;

  double alpha_value() const { return alpha.value_or(0.0); }
  double domain_area() const {
    return 4.0 * domain_half_width * domain_half_width;
  }
  int curve_samples() const { return M > 0 ? M : std::max(8 * N1, 256); }
  double dt_value(const ModeBasis& basis) const;
};

struct RclState {
  MeanderParams p;
  double sigma = 0.0;
  double time = 0.0;
};

// sigma(p) = sigma0 - c0 m1^2 R0 p0 / m0 (leading order slaving).
double slaved_sigma(const MeanderParams& p, const RclConfig& cfg,
                    const ScalarConstants& c);

double sigma0_of(const RclConfig& cfg, const ScalarConstants& c);
double c0_of(const RclConfig& cfg, const ScalarConstants& c);

// V_p = eps^3 (m0/m1^2)(sigma1* - sigma) kappa
//       - eps^4 (Lap_s kappa + kappa^3/2 + alpha kappa).
std::vector<double> normal_velocity(const CurveSamples& c, double sigma,
                                    const RclConfig& cfg,
                                    const ScalarConstants& consts);

// Explicit Euler step of the Galerkin-projected flow; sigma re-slaved.
RclState step_curve(const RclState& state, const RclConfig& cfg,
                    const ScalarConstants& consts, const ModeBasis& basis);

struct MeanderRates {
  double p0_dot = 0.0, p1_dot = 0.0, p2_dot = 0.0;
  std::vector<double> p_hat_dot;
};
// Linearized meander vector field:
//   p0'   = -eps^3 (c0/R0)(p0 - p0*)
//   p_hat' = -eps^3 [ (c0/R0)(D + U^T)(p0 - p0*) + (eps/R0^4)(D - I)^2 ] p_hat.
// u_square is the (N1-3)x(N1-3) block U_{jk}, j,k >= 3.
MeanderRates meander_rhs(const MeanderParams& p, const RclConfig& cfg,
                         const ScalarConstants& consts, const Mat& u_square);

struct P0Star {
  double value = 0.0;
  double leading = 0.0;
  bool partial = false;  // eps-correction included (alpha supplied), C1 == 0
};
P0Star p0_star(const RclConfig& cfg, const ScalarConstants& consts);

// sigma2* reported only when alpha is supplied.
std::optional<double> sigma2_star(const RclConfig& cfg,
                                  const ScalarConstants& consts);

// mu0(sigma, p0); reporting only, the rates use mu0 = 1.
double mu0_report(const ScalarConstants& c, double sigma, double p0, double eps,
                  double eta_d);

// Canham-Helfrich reduced energy nu_s/2 int kappa^2 + nu_b/(2 eps)(sigma - sigma1*)^2.
double reduced_energy(const CurveSamples& c, double sigma, const RclConfig& cfg,
                      const ScalarConstants& consts);
double reduced_energy_at(const MeanderParams& p, double sigma,
                         const RclConfig& cfg, const ScalarConstants& consts,
                         const ModeBasis& basis);

enum class ReducedMode { FullCurve, MeanderOde };

struct TrajectoryRow {
  double t = 0.0;
  double p0 = 0.0;
  double sigma = 0.0;
  double length = 0.0;
  double energy = 0.0;
  double vnorm22 = 0.0;  // ||p_hat||_{V2^2}
  double vnorm32 = 0.0;  // ||p_hat||_{V3^2}
  MeanderParams p;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  bool completed = true;
  std::string halt_reason;
};

Trajectory run_reduced(const RclConfig& cfg, const ScalarConstants& consts,
                       const ModeBasis& basis, RclState initial,
                       ReducedMode mode);

}  // namespace fch
