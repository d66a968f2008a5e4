#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fch/field_ops.hpp"
#include "fch/spectral.hpp"
#include "fch/well.hpp"

namespace fch {

enum class Scheme { SemiImplicitSplitting, Rk4Explicit };

struct PdeConfig {
  double eps = 0.2;
  double eta1 = 1.45;
  double eta2 = 2.0;
  double dt = 0.05;
  double t_end = 100.0;
  Scheme scheme = Scheme::SemiImplicitSplitting;
  double stabilization_c = -1.0;  // < 0: auto, 2 (max |W''| over field range)^2
  int snapshot_every = 100;
  bool dealias_two_thirds = false;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> mass_values;     // grid mean of u
  std::vector<double> energy_values;   // FCH energy
  std::vector<double> interface_length_estimates;  // -1 when no extractor ran
  std::vector<double> p0_estimates;
  bool energy_monotone = true;
  bool aborted = false;
  double t_abort = 0.0;
  std::string abort_reason;
};

// Optional per-snapshot callback; may append length/p0 estimates.
using SnapshotHook =
    std::function<void(double t, const Field2D& u, TimeSeries& series)>;

// Mass-preserving L2 gradient flow du/dt = -Pi0 F(u) on the periodic cell.
class PdeFlow {
 public:
  PdeFlow(Grid2D grid, WellSpec well, PdeConfig cfg);

  // One time step in place. The spectral zero mode is held exactly fixed.
  void step(Field2D& u);

  TimeSeries run(Field2D& u, const SnapshotHook& hook = {});

  double energy(const Field2D& u) const;
  const PdeConfig& config() const { return cfg_; }
  double stabilization() const { return c_; }

 private:
  void ensure_stabilization(const Field2D& u);
  Field2D minus_pi0_f(const Field2D& u) const;
  void step_imex(Field2D& u);
  void step_rk4(Field2D& u);

  Grid2D grid_;
  WellSpec well_;
  PdeConfig cfg_;
  Spectral2D sp_;
  double c_ = -1.0;
  double blowup_bound_ = 0.0;
};

}  // namespace fch
