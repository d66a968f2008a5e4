#pragma once

#include <optional>
#include <string>

#include "fch/pde_flow.hpp"
#include "fch/rcl_flow.hpp"

namespace fch {

// Run configuration; parsed from a key = value file with [section] headers.
struct RunConfig {
  // [well]
  WellSpec well = WellSpec::default_tilted();
  // [grid]
  int grid_n = 128;
  double grid_half_width = 2.0 * 3.14159265358979323846;
  // [physics]
  double eps = 0.2;
  double eta1 = 1.45;
  double eta2 = 2.0;
  std::optional<double> alpha;
  std::optional<double> s1;
  // [mass] - exactly one of m0_total / sigma0 / sigma_factor drives the mass
  std::optional<double> m0_total;      // M0
  std::optional<double> sigma0;        // initial bulk density
  std::optional<double> sigma_factor;  // initial sigma = factor * sigma1*
  // [curve]
  double r0 = 3.5;
  int n1 = 33;
  int curve_m = 0;
  double delta = 0.2;
  double perturbation = 0.0;  // seeded initial p_hat amplitude
  // [solver]
  Scheme scheme = Scheme::SemiImplicitSplitting;
  double dt = 0.05;
  double t_end = 1200.0;
  int snapshot_every = 200;
  double stabilization_c = -1.0;
  bool dealias = false;
  // [reduced]
  double reduced_dt = 0.0;
  double reduced_t_end = 0.0;
  // [experiment]
  std::string preset = "constants";
  unsigned long seed = 12345;
  bool with_pde = false;
  // [output]
  std::string out_dir = "out";
  bool strict = false;

  Grid2D grid() const { return Grid2D{grid_n, grid_half_width}; }
};

RunConfig parse_config_file(const std::string& path, RunConfig base = {});

// Cross-field checks; throws std::invalid_argument naming the violated
// constraint.
void validate_config(const RunConfig& cfg);

// Dispatch on cfg.preset; returns a process exit status.
int run_experiment(const RunConfig& cfg);

}  // namespace fch
