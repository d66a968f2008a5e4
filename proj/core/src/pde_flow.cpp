#include "fch/pde_flow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace fch {

PdeFlow::PdeFlow(Grid2D grid, WellSpec well, PdeConfig cfg)
    : grid_(grid), well_(well), cfg_(cfg), sp_(grid) {
  if (cfg_.dt <= 0.0) throw std::invalid_argument("PdeFlow: dt must be positive");
  blowup_bound_ =
      10.0 * std::max(std::abs(well_.b_minus), std::abs(well_.b_plus));
  if (cfg_.scheme == Scheme::Rk4Explicit) {
    // explicit fourth-order stiffness bound, warn-level heuristic
    const double dx = grid_.dx();
    const double e4 = std::pow(cfg_.eps, 4);
    const double kmax4 = std::pow(std::numbers::pi / dx, 4);
    if (cfg_.dt * e4 * kmax4 > 2.8)
      std::fprintf(stderr,
                   "PdeFlow: Rk4 dt=%.3g exceeds the eps^4 k_max^4 stability "
                   "heuristic\n",
                   cfg_.dt);
  }
}

void PdeFlow::ensure_stabilization(const Field2D& u) {
  if (c_ >= 0.0) return;
  if (cfg_.stabilization_c >= 0.0) {
    c_ = cfg_.stabilization_c;
    return;
  }
  const auto [lo, hi] = std::minmax_element(u.v.begin(), u.v.end());
  double w2max = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double x = *lo - 0.1 + (*hi - *lo + 0.2) * i / 64.0;
    w2max = std::max(w2max, std::abs(eval_well(well_, x, 2)));
  }
  c_ = 2.0 * w2max * w2max;
}

Field2D PdeFlow::minus_pi0_f(const Field2D& u) const {
  Field2D f = chemical_potential(sp_, u, well_, cfg_.eps, cfg_.eta1, cfg_.eta2);
  const double m = f.mean();
  for (double& x : f.v) x = -(x - m);
  return f;
}

void PdeFlow::step_imex(Field2D& u) {
  // F(u) = eps^4 Lap^2 u + R(u); treat the bilaplacian implicitly with a
  // stabilization shift, diagonal in spectral space.
  const double e4 = std::pow(cfg_.eps, 4);
  const double dt = cfg_.dt;
  const Field2D F = chemical_potential(sp_, u, well_, cfg_.eps, cfg_.eta1, cfg_.eta2);
  std::vector<std::complex<double>> uh, fh;
  sp_.forward(u, uh);
  sp_.forward(F, fh);
  const auto& k2 = sp_.ksq();
  const auto& mask = sp_.dealias_mask();
  for (size_t i = 0; i < uh.size(); ++i) {
    if (k2[i] == 0.0) continue;  // zero mode held fixed: exact mass conservation
    const double k4 = k2[i] * k2[i];
    std::complex<double> r = fh[i] - e4 * k4 * uh[i];
    if (cfg_.dealias_two_thirds) r *= mask[i];
    uh[i] = ((1.0 + dt * c_) * uh[i] - dt * r) / (1.0 + dt * (e4 * k4 + c_));
  }
  u = sp_.backward(uh);
}

void PdeFlow::step_rk4(Field2D& u) {
  const double dt = cfg_.dt;
  const Field2D k1 = minus_pi0_f(u);
  Field2D tmp = u;
  for (size_t i = 0; i < u.v.size(); ++i) tmp.v[i] = u.v[i] + 0.5 * dt * k1.v[i];
  const Field2D k2 = minus_pi0_f(tmp);
  for (size_t i = 0; i < u.v.size(); ++i) tmp.v[i] = u.v[i] + 0.5 * dt * k2.v[i];
  const Field2D k3 = minus_pi0_f(tmp);
  for (size_t i = 0; i < u.v.size(); ++i) tmp.v[i] = u.v[i] + dt * k3.v[i];
  const Field2D k4 = minus_pi0_f(tmp);
  for (size_t i = 0; i < u.v.size(); ++i)
    u.v[i] += dt / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
}

void PdeFlow::step(Field2D& u) {
  ensure_stabilization(u);
  if (cfg_.scheme == Scheme::SemiImplicitSplitting)
    step_imex(u);
  else
    step_rk4(u);
  for (double x : u.v) {
    if (!std::isfinite(x) || std::abs(x) > blowup_bound_)
      throw std::runtime_error("PdeFlow::step: field blow-up detected");
  }
}

double PdeFlow::energy(const Field2D& u) const {
  return fch_energy(sp_, u, well_, cfg_.eps, cfg_.eta1, cfg_.eta2);
}

TimeSeries PdeFlow::run(Field2D& u, const SnapshotHook& hook) {
  TimeSeries ts;
  ensure_stabilization(u);
  const long nsteps = static_cast<long>(std::ceil(cfg_.t_end / cfg_.dt));
  double t = 0.0;
  double last_energy = 0.0;
  auto record = [&](double tn, const Field2D& un) {
    const double e = energy(un);
    if (!ts.energy_values.empty() &&
        e > last_energy + 1e-8 * std::abs(last_energy))
      ts.energy_monotone = false;
    last_energy = e;
    ts.times.push_back(tn);
    ts.mass_values.push_back(un.mean());
    ts.energy_values.push_back(e);
    ts.interface_length_estimates.push_back(-1.0);
    ts.p0_estimates.push_back(0.0);
    if (hook) hook(tn, un, ts);
  };
  record(0.0, u);
  Field2D last_good = u;
  for (long n = 0; n < nsteps; ++n) {
    try {
      step(u);
    } catch (const std::exception& e) {
      ts.aborted = true;
      ts.t_abort = t;
      ts.abort_reason = e.what();
      u = last_good;  // last finite snapshot
      break;
    }
    t += cfg_.dt;
    if ((n + 1) % cfg_.snapshot_every == 0 || n + 1 == nsteps) {
      record(t, u);
      last_good = u;
    }
  }
  return ts;
}

}  // namespace fch
