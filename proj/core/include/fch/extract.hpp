#pragma once

#include <vector>

#include "fch/curve.hpp"
#include "fch/spectral.hpp"

namespace fch {

// Geometric stand-in for the manifold projection: recovers a radius function
// r(theta) from a single closed ring-like level set, then meander parameters.
struct ExtractConfig {
  int n_rays = 512;
  double level = 0.0;       // crossing level; 0 -> caller supplies explicitly
  Vec2 center_seed{0.0, 0.0};
  double max_skip_fraction = 0.05;
};

struct InterfaceLocate {
  std::vector<double> theta;  // ray angles (uniform)
  std::vector<double> radius; // midpoint of the two level crossings
  std::vector<uint8_t> valid;
  Vec2 center{0.0, 0.0};
  int skipped = 0;
  double mean_radius = 0.0;
};

// Center refined as the centroid of the super-level region; along each ray the
// two flank crossings of u = level are bracketed and bisected on the bilinear
// interpolant; rays with a crossing count != 2 are skipped and counted.
InterfaceLocate locate_interface(const Field2D& u, const ExtractConfig& cfg);

// Leading-order identification r(theta) ~ R0 (1 + p0) + (1 + p0) pbar:
//   p0 = mean(r)/R0 - 1, p1/p2 from the center shift scaled by Theta_0,
//   p_hat from the Fourier coefficients of r - mean(r) on the Theta_k
//   normalization (divided by 1 + p0).
MeanderParams fit_modes(const InterfaceLocate& loc, const ModeBasis& basis,
                        double R0);

// Default crossing level b- + 0.5 (u* - b-).
double default_level(double b_minus, double turning_point);

}  // namespace fch
