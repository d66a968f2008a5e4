#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fch/numerics.hpp"

namespace fch {

// Laplace-Beltrami modes of the base circle of radius R0, orthonormal in
// L2([0, 2 pi R0)): Theta_0 = 1/sqrt(2 pi R0); for k >= 1,
// Theta_{2k-1} = cos(k s/R0)/sqrt(pi R0), Theta_{2k} = sin(k s/R0)/sqrt(pi R0),
// with -Lap_s Theta_j = beta_j^2 Theta_j / R0^2, beta_{2k-1} = beta_{2k} = k.
struct ModeBasis {
  double R0 = 1.0;
  int N1 = 33;
  std::vector<double> beta;

  static ModeBasis make(double R0, int N1);
  // Weyl-count helper: N1 from the spectral parameter rho, N1 = 2 floor(rho^{1/4} R0 / eps) + 1.
  static int n1_from_spectral(double eps, double rho, double R0);

  double theta(int j, double s) const;        // on the base circle
  double theta_prime(int j, double s) const;  // d/ds
  // Scaled modes as functions of the arclength of Gamma_p.
  double theta_tilde(int j, double s_tilde, double p0) const {
    return theta(j, s_tilde / (1.0 + p0));
  }
  double theta_tilde_prime(int j, double s_tilde, double p0) const {
    return theta_prime(j, s_tilde / (1.0 + p0)) / (1.0 + p0);
  }
};

// Meander parameters p = (p0, p1, p2, p_hat), p_hat = (p_3 ... p_{N1-1}).
struct MeanderParams {
  double p0 = 0.0, p1 = 0.0, p2 = 0.0;
  std::vector<double> p_hat;

  static MeanderParams zero(int N1) {
    MeanderParams p;
    p.p_hat.assign(N1 >= 3 ? N1 - 3 : 0, 0.0);
    return p;
  }
  int n1() const { return static_cast<int>(p_hat.size()) + 3; }
  // || D^{r/2} p_hat ||_{l^k}, D = diag(beta_3^2, ...).
  double norm_v(const ModeBasis& basis, int r, int k) const;
  // p0 > -1/2, |p1|+|p2|+||p_hat||_{V2} <= C, ||p_hat||_{V1} <= C delta.
  bool in_domain(const ModeBasis& basis, double delta, double C = 1.0) const;
};

struct Vec2 {
  double x = 0.0, y = 0.0;
};

// Discretized Gamma_p on a uniform parameter grid.
struct CurveSamples {
  double R0 = 1.0;
  int M = 0;
  MeanderParams p;
  std::vector<double> s;        // parameter in [0, 2 pi R0)
  std::vector<double> x, y;     // gamma
  std::vector<double> xp, yp;   // gamma' (d/ds)
  std::vector<double> xpp, ypp; // gamma''
  std::vector<double> speed;    // |gamma'|
  std::vector<double> s_tilde;  // arclength, s_tilde(0) = 0
  std::vector<double> nx, ny;   // outward normal
  std::vector<double> kappa;
  double total_length = 0.0;
  double A_norm = 1.0;
  int fixed_point_iterations = 0;
  double min_separation = 0.0;  // min distance between parameter-separated samples

  Vec2 gamma_at(double sq) const;
  Vec2 gamma_prime_at(double sq) const;
  Vec2 gamma_second_at(double sq) const;
  double reach_estimate() const;
};

struct BuildOptions {
  double fixed_point_tol = 1e-10;
  int max_fixed_point_iterations = 50;
  bool check_self_intersection = true;
  double separation_floor = 0.0;  // 0 -> 1e-3 * R0
};

// Resolves the implicit parameterization
//   gamma_p = (1+p0) (gamma_0 + pbar(s_tilde) n_0) / A(p) + translation,
// pbar evaluated at the arclength of gamma_p itself and A normalizing the
// length, by undamped fixed-point iteration on (s_tilde, A).
CurveSamples build_curve(const ModeBasis& basis, const MeanderParams& p, int M,
                         const BuildOptions& opts = {});

// kappa = gamma'' . n / |gamma'|^2 (negative for the base circle).
std::vector<double> curvature(const CurveSamples& c);

// order-th derivative with respect to arclength via chain rule and spectral
// differentiation in the parameter.
std::vector<double> arc_derivative(const CurveSamples& c,
                                   std::span<const double> f, int order);

struct GalerkinResult {
  std::vector<double> coefficients;   // size N1
  std::vector<double> reconstruction; // on the parameter grid
};
// coefficients (1+p0)^{-1} int f Theta~_j ds~; reconstruction sums them back.
GalerkinResult galerkin_project(const CurveSamples& c, std::span<const double> f,
                                const ModeBasis& basis);

struct CurvatureProjections {
  std::vector<double> A;  // int kappa Theta~_k ds~
  std::vector<double> B;  // int (-Lap_s kappa - kappa^3/2 + alpha kappa) Theta~_k ds~
};
CurvatureProjections curvature_projections(const CurveSamples& c,
                                           const ModeBasis& basis, double alpha);

struct XiFunctions {
  Mat xi;  // N1 x M samples of xi_j(s)
  Mat U;   // (N1-3) x N1, U_{jk} = (1+p0)^{-1} int s~ Theta~_j' Theta~_k ds~
};
XiFunctions xi_functions(const CurveSamples& c, const MeanderParams& p,
                         const ModeBasis& basis);

// U at p = 0 (used frozen by the meander ODE).
Mat u_matrix_base(const ModeBasis& basis, int M = 0);

struct FootPoint {
  double s = 0.0;  // parameter of the foot
  double r = 0.0;  // signed distance, positive along the outward normal
};
std::optional<FootPoint> signed_distance(const CurveSamples& c, Vec2 x,
                                         double reach);

}  // namespace fch
