#pragma once

#include <string>
#include <vector>

#include "fch/config.hpp"
#include "fch/extract.hpp"
#include "fch/field_ops.hpp"
#include "fch/io.hpp"
#include "fch/pde_flow.hpp"
#include "fch/rcl_flow.hpp"

namespace fch {

// Shared setup for the presets and the acceptance suite.
struct Lab {
  RunConfig cfg;
  ProfileFamily fam;
  ModeBasis basis;
  Grid2D grid;
};
Lab make_lab(const RunConfig& cfg);

// Initial bulk density from the [mass] section (sigma0 / sigma_factor / M0).
double initial_sigma(const Lab& lab);

// Scaled total mass of a field: M0 = <u - b-> |Omega| / eps.
double mass_of_field(const Field2D& u, double b_minus, double eps);

// Bilayer initial datum around Gamma_p with the given sigma; ell picked by
// default_ell.
struct SynthResult {
  Field2D u;
  double ell = 0.0;
  double M0 = 0.0;
};
SynthResult synthesize_initial(const Lab& lab, const MeanderParams& p,
                               double sigma);

// PDE runs with the interface extractor attached per snapshot.
struct ExtractionSeries {
  std::vector<double> t;
  std::vector<double> p0;
  std::vector<double> length;
  std::vector<MeanderParams> params;
  bool ok = true;
};
SnapshotHook extraction_hook(const Lab& lab, ExtractionSeries* out);

// Log-linear fit of |a(t)| over the window where it stays above floor_abs.
double fit_exponential_rate(std::span<const double> t,
                            std::span<const double> amplitude,
                            double floor_abs = 1e-12);

// Presets (also reachable through run_experiment).
int preset_constants(const RunConfig& cfg);
int preset_figure1(const RunConfig& cfg);
int preset_equilibrium(const RunConfig& cfg);
int preset_decay_rates(const RunConfig& cfg);
int preset_residual(const RunConfig& cfg);

}  // namespace fch
