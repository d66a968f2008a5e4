#include "fch/rcl_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fch/field_ops.hpp"

namespace fch {
namespace {
constexpr double kPi = std::numbers::pi;
}

double RclConfig::dt_value(const ModeBasis& basis) const {
  if (dt > 0.0) return dt;
  const double beta_max = basis.beta.back();
  const double fastest = std::pow(eps, 4) * std::pow(beta_max, 4) /
                         std::pow(R0, 4);
  return 0.1 / fastest;
}

double sigma0_of(const RclConfig& cfg, const ScalarConstants& c) {
  return sigma0_constant(c, cfg.M0, 2.0 * kPi * cfg.R0, cfg.domain_area());
}

double c0_of(const RclConfig& cfg, const ScalarConstants& c) {
  // fixed positive constant of the slaving expansion (eps -> 0 value)
  return 2.0 * kPi * c.m0 * c.m0 /
         (c.b2_far * cfg.domain_area() * c.m1 * c.m1);
}

double slaved_sigma(const MeanderParams& p, const RclConfig& cfg,
                    const ScalarConstants& c) {
  if (cfg.slaving == SlavingModel::LeadingOrder)
    return sigma0_of(cfg, c) -
           c0_of(cfg, c) * c.m1 * c.m1 * cfg.R0 * p.p0 / c.m0;
  const double eta_d = cfg.eta1 - cfg.eta2;
  const double G = 2.0 * kPi * cfg.R0 * (1.0 + p.p0);
  const double m_eff = c.m0 + cfg.eps * eta_d * c.m2;
  const double b2_bar = c.b2_far * cfg.domain_area() + cfg.eps * c.b2_excess * G;
  return (cfg.M0 - m_eff * G) / b2_bar;
}

std::vector<double> normal_velocity(const CurveSamples& c, double sigma,
                                    const RclConfig& cfg,
                                    const ScalarConstants& consts) {
  const double e3 = std::pow(cfg.eps, 3);
  const double e4 = e3 * cfg.eps;
  const double drive = e3 * consts.m0 / (consts.m1 * consts.m1) *
                       (consts.sigma1_star - sigma);
  const double alpha = cfg.alpha_value();
  const std::vector<double> lap_kappa = arc_derivative(c, c.kappa, 2);
  std::vector<double> v(c.M);
  for (int i = 0; i < c.M; ++i) {
    const double k = c.kappa[i];
    v[i] = drive * k - e4 * (lap_kappa[i] + 0.5 * k * k * k + alpha * k);
  }
  return v;
}

RclState step_curve(const RclState& state, const RclConfig& cfg,
                    const ScalarConstants& consts, const ModeBasis& basis) {
  BuildOptions opts;
  opts.check_self_intersection = false;
  const CurveSamples c = build_curve(basis, state.p, cfg.curve_samples(), opts);
  const std::vector<double> v = normal_velocity(c, state.sigma, cfg, consts);

  // Projected normal velocity -> parameter rates through the leading-order
  // xi table: identity block for j >= 1, R0/Theta0 scaling for j = 0.
  const double ds = 2.0 * kPi * cfg.R0 / c.M;
  const double one_p0 = 1.0 + state.p.p0;
  const double theta0 = 1.0 / std::sqrt(2.0 * kPi * cfg.R0);
  const double dt = cfg.dt_value(basis);

  RclState next = state;
  for (int j = 0; j < basis.N1; ++j) {
    double acc = 0.0;
    for (int i = 0; i < c.M; ++i)
      acc += v[i] * basis.theta_tilde(j, c.s_tilde[i], state.p.p0) * c.speed[i];
    const double vproj = acc * ds;  // int V Theta~_j ds~
    double rate;
    if (j == 0)
      rate = theta0 * vproj / (one_p0 * cfg.R0);
    else
      rate = vproj / one_p0;
    if (j == 0)
      next.p.p0 += dt * rate;
    else if (j == 1)
      next.p.p1 += dt * rate;
    else if (j == 2)
      next.p.p2 += dt * rate;
    else
      next.p.p_hat[j - 3] += dt * rate;
  }
  next.sigma = slaved_sigma(next.p, cfg, consts);
  next.time = state.time + dt;
  if (!next.p.in_domain(basis, cfg.delta))
    throw std::runtime_error("step_curve: p left the admissible domain D_delta");
  return next;
}

MeanderRates meander_rhs(const MeanderParams& p, const RclConfig& cfg,
                         const ScalarConstants& consts, const Mat& u_square) {
  const int nh = static_cast<int>(p.p_hat.size());
  const double e3 = std::pow(cfg.eps, 3);
  const double c0 = c0_of(cfg, consts);
  const double dp0 = p.p0 - p0_star(cfg, consts).value;
  MeanderRates r;
  r.p0_dot = -e3 * c0 / cfg.R0 * dp0;
  r.p1_dot = 0.0;
  r.p2_dot = 0.0;
  r.p_hat_dot.assign(nh, 0.0);
  const double r4 = std::pow(cfg.R0, 4);
  for (int k = 0; k < nh; ++k) {
    const double beta2 = std::pow(static_cast<double>((k + 3 + 1) / 2), 2);
    double acc = (c0 / cfg.R0) * dp0 * beta2 * p.p_hat[k];
    // U^T coupling: (U^T p_hat)_k = sum_j U_{jk} p_hat_j over the square block
    double ut = 0.0;
    for (int j = 0; j < nh; ++j) ut += u_square.at(j, k) * p.p_hat[j];
    acc += (c0 / cfg.R0) * dp0 * ut;
    acc += (cfg.eps / r4) * (beta2 - 1.0) * (beta2 - 1.0) * p.p_hat[k];
    r.p_hat_dot[k] = -e3 * acc;
  }
  return r;
}

P0Star p0_star(const RclConfig& cfg, const ScalarConstants& consts) {
  P0Star out;
  const double c0 = c0_of(cfg, consts);
  const double s0 = sigma0_of(cfg, consts);
  out.leading = -consts.m0 / (c0 * cfg.R0 * consts.m1 * consts.m1) *
                (consts.sigma1_star - s0);
  out.value = out.leading;
  if (cfg.alpha.has_value()) {
    const double denom = 1.0 + out.leading;
    const double p01 = (0.5 / (cfg.R0 * cfg.R0 * denom * denom) -
                        cfg.alpha.value()) /
                       (c0 * cfg.R0);
    out.value = out.leading + cfg.eps * p01;
    out.partial = true;
  }
  return out;
}

std::optional<double> sigma2_star(const RclConfig& cfg,
                                  const ScalarConstants& consts) {
  if (!cfg.alpha.has_value()) return std::nullopt;
  const P0Star p0s = p0_star(cfg, consts);
  const double denom = 1.0 + p0s.leading;
  const double m_ratio = consts.m1 * consts.m1 / consts.m0;
  return m_ratio *
         (-0.5 / (cfg.R0 * cfg.R0 * denom * denom) + cfg.alpha.value());
}

double mu0_report(const ScalarConstants& c, double sigma, double p0, double eps,
                  double eta_d) {
  const double m12 = c.m1 * c.m1;
  return m12 / (m12 + eps * (sigma * c.m2 + eta_d * c.m3 * c.m3)) / (1.0 + p0);
}

double reduced_energy(const CurveSamples& c, double sigma, const RclConfig& cfg,
                      const ScalarConstants& consts) {
  const double ds = 2.0 * kPi * cfg.R0 / c.M;
  double k2int = 0.0;
  for (int i = 0; i < c.M; ++i)
    k2int += c.kappa[i] * c.kappa[i] * c.speed[i] * ds;
  const double nu_s = consts.m1 * consts.m1;
  const double nu_b = cfg.domain_area() / (consts.w2_bminus * consts.w2_bminus);
  const double dev = sigma - consts.sigma1_star;
  return 0.5 * nu_s * k2int + 0.5 * nu_b / cfg.eps * dev * dev;
}

double reduced_energy_at(const MeanderParams& p, double sigma,
                         const RclConfig& cfg, const ScalarConstants& consts,
                         const ModeBasis& basis) {
  BuildOptions opts;
  opts.check_self_intersection = false;
  const CurveSamples c = build_curve(basis, p, cfg.curve_samples(), opts);
  return reduced_energy(c, sigma, cfg, consts);
}

Trajectory run_reduced(const RclConfig& cfg, const ScalarConstants& consts,
                       const ModeBasis& basis, RclState state,
                       ReducedMode mode) {
  Trajectory traj;
  const double dt = cfg.dt_value(basis);
  const long nsteps = static_cast<long>(std::ceil(cfg.t_end / dt));
  const Mat u_sq = [&] {
    const Mat full = u_matrix_base(basis);
    Mat sq(basis.N1 - 3, basis.N1 - 3);
    for (int j = 0; j < basis.N1 - 3; ++j)
      for (int k = 0; k < basis.N1 - 3; ++k) sq.at(j, k) = full.at(j, k + 3);
    return sq;
  }();

  state.sigma = slaved_sigma(state.p, cfg, consts);
  auto record = [&](const RclState& s) {
    TrajectoryRow row;
    row.t = s.time;
    row.p0 = s.p.p0;
    row.sigma = s.sigma;
    row.length = 2.0 * kPi * cfg.R0 * (1.0 + s.p.p0);
    row.energy = reduced_energy_at(s.p, s.sigma, cfg, consts, basis);
    row.vnorm22 = s.p.norm_v(basis, 2, 2);
    row.vnorm32 = s.p.norm_v(basis, 3, 2);
    row.p = s.p;
    traj.rows.push_back(std::move(row));
  };
  record(state);

  for (long n = 0; n < nsteps; ++n) {
    try {
      if (mode == ReducedMode::FullCurve) {
        state = step_curve(state, cfg, consts, basis);
      } else {
        const MeanderRates r = meander_rhs(state.p, cfg, consts, u_sq);
        state.p.p0 += dt * r.p0_dot;
        state.p.p1 += dt * r.p1_dot;
        state.p.p2 += dt * r.p2_dot;
        for (size_t k = 0; k < state.p.p_hat.size(); ++k)
          state.p.p_hat[k] += dt * r.p_hat_dot[k];
        state.sigma = slaved_sigma(state.p, cfg, consts);
        state.time += dt;
      }
    } catch (const std::exception& e) {
      traj.completed = false;
      traj.halt_reason = e.what();
      break;
    }
    if ((n + 1) % cfg.snapshot_every == 0 || n + 1 == nsteps) record(state);
  }
  return traj;
}

}  // namespace fch
