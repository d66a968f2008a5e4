#include "fch/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fch/spectral.hpp"

namespace fch {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_periodic(double s, double period) {
  s = std::fmod(s, period);
  if (s < 0.0) s += period;
  if (s >= period) s -= period;
  return s;
}

// Periodic cubic Hermite on a uniform grid with supplied derivative samples.
double periodic_hermite(std::span<const double> vals, std::span<const double> der,
                        double period, double sq) {
  const int m = static_cast<int>(vals.size());
  const double h = period / m;
  const double pos = wrap_periodic(sq, period) / h;
  int i = static_cast<int>(pos);
  if (i >= m) i = m - 1;
  const double t = pos - i;
  const int j = (i + 1) % m;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * vals[i] + h10 * h * der[i] + h01 * vals[j] + h11 * h * der[j];
}

}  // namespace

ModeBasis ModeBasis::make(double R0, int N1) {
  if (R0 <= 0.0) throw std::invalid_argument("ModeBasis: R0 must be positive");
  if (N1 < 4) throw std::invalid_argument("ModeBasis: N1 must be >= 4");
  ModeBasis b;
  b.R0 = R0;
  b.N1 = N1;
  b.beta.resize(N1);
  b.beta[0] = 0.0;
  for (int j = 1; j < N1; ++j) b.beta[j] = static_cast<double>((j + 1) / 2);
  return b;
}

int ModeBasis::n1_from_spectral(double eps, double rho, double R0) {
  const int kmax = static_cast<int>(std::floor(std::pow(rho, 0.25) * R0 / eps));
  return 2 * std::max(kmax, 2) + 1;
}

double ModeBasis::theta(int j, double s) const {
  const double c0 = 1.0 / std::sqrt(2.0 * kPi * R0);
  if (j == 0) return c0;
  const int k = (j + 1) / 2;
  const double c = 1.0 / std::sqrt(kPi * R0);
  const double arg = k * s / R0;
  return (j % 2 == 1) ? c * std::cos(arg) : c * std::sin(arg);
}

double ModeBasis::theta_prime(int j, double s) const {
  if (j == 0) return 0.0;
  const int k = (j + 1) / 2;
  const double c = 1.0 / std::sqrt(kPi * R0);
  const double arg = k * s / R0;
  const double w = static_cast<double>(k) / R0;
  return (j % 2 == 1) ? -c * w * std::sin(arg) : c * w * std::cos(arg);
}

double MeanderParams::norm_v(const ModeBasis& basis, int r, int k) const {
  if (k != 1 && k != 2) throw std::invalid_argument("norm_v: k must be 1 or 2");
  if (r < 0 || r > 5) throw std::invalid_argument("norm_v: r must be in 0..5");
  double acc = 0.0;
  for (size_t i = 0; i < p_hat.size(); ++i) {
    const double beta = basis.beta[i + 3];
    const double w = std::pow(beta, static_cast<double>(r)) * std::abs(p_hat[i]);
    acc += (k == 1) ? w : w * w;
  }
  return (k == 1) ? acc : std::sqrt(acc);
}

bool MeanderParams::in_domain(const ModeBasis& basis, double delta, double C) const {
  if (!(p0 > -0.5)) return false;
  if (std::abs(p1) + std::abs(p2) + norm_v(basis, 2, 1) > C) return false;
  if (norm_v(basis, 1, 1) > C * delta) return false;
  return true;
}

Vec2 CurveSamples::gamma_at(double sq) const {
  const double period = 2.0 * kPi * R0;
  return {periodic_hermite(x, xp, period, sq), periodic_hermite(y, yp, period, sq)};
}

Vec2 CurveSamples::gamma_prime_at(double sq) const {
  const double period = 2.0 * kPi * R0;
  return {periodic_hermite(xp, xpp, period, sq), periodic_hermite(yp, ypp, period, sq)};
}

Vec2 CurveSamples::gamma_second_at(double sq) const {
  // derivative of the Hermite interpolant of gamma'; slope samples from kappa
  // reconstruction are not stored, use finite view via xpp grid interpolation
  const double period = 2.0 * kPi * R0;
  const int m = M;
  const double h = period / m;
  const double pos = wrap_periodic(sq, period) / h;
  int i = static_cast<int>(pos);
  if (i >= m) i = m - 1;
  const double t = pos - i;
  const int j = (i + 1) % m;
  return {(1.0 - t) * xpp[i] + t * xpp[j], (1.0 - t) * ypp[i] + t * ypp[j]};
}

double CurveSamples::reach_estimate() const {
  double kmax = 0.0;
  for (double k : kappa) kmax = std::max(kmax, std::abs(k));
  const double r_curv = (kmax > 0.0) ? 1.0 / kmax : R0;
  // distant-branch proximity: pairs at least a quarter turn apart in arclength
  const double arc_gap = 2.0 * r_curv;
  const double period = total_length;
  double dmin = std::numeric_limits<double>::max();
  for (int i = 0; i < M; ++i) {
    for (int j = i + 1; j < M; ++j) {
      const double darc =
          std::min(s_tilde[j] - s_tilde[i], period - (s_tilde[j] - s_tilde[i]));
      if (darc <= arc_gap) continue;
      dmin = std::min(dmin, std::hypot(x[j] - x[i], y[j] - y[i]));
    }
  }
  if (dmin == std::numeric_limits<double>::max()) return r_curv;
  return std::min(r_curv, 0.5 * dmin);
}

CurveSamples build_curve(const ModeBasis& basis, const MeanderParams& p, int M,
                         const BuildOptions& opts) {
  const int N1 = basis.N1;
  if (p.n1() != N1) throw std::invalid_argument("build_curve: p size != N1");
  if (M < 8 * N1) throw std::invalid_argument("build_curve: M must be >= 8 N1");
  if (!(p.p0 > -0.5)) throw std::invalid_argument("build_curve: p0 <= -1/2");

  const double R0 = basis.R0;
  const double period = 2.0 * kPi * R0;
  const double ds = period / M;
  const double one_p0 = 1.0 + p.p0;
  const double target_length = one_p0 * period;
  const double theta0 = 1.0 / std::sqrt(period);

  CurveSamples c;
  c.R0 = R0;
  c.M = M;
  c.p = p;
  c.s.resize(M);
  for (int i = 0; i < M; ++i) c.s[i] = ds * i;

  // base circle and outward normal
  std::vector<double> cx(M), cy(M);
  for (int i = 0; i < M; ++i) {
    cx[i] = std::cos(c.s[i] / R0);
    cy[i] = std::sin(c.s[i] / R0);
  }

  auto pbar_at = [&](double st) {
    double acc = 0.0;
    for (int j = 3; j < N1; ++j)
      acc += p.p_hat[j - 3] * basis.theta_tilde(j, st, p.p0);
    return acc;
  };

  std::vector<double> st(M), st_prev(M);
  for (int i = 0; i < M; ++i) st[i] = one_p0 * c.s[i];
  double A = 1.0;

  Fft1D& fft = fft1d_cache(M);
  c.x.resize(M);
  c.y.resize(M);
  c.xp.resize(M);
  c.yp.resize(M);
  c.speed.resize(M);

  const bool trivial = (p.norm_v(basis, 0, 1) == 0.0);
  int iterations = 0;
  for (int it = 0; it < opts.max_fixed_point_iterations; ++it) {
    ++iterations;
    st_prev = st;
    for (int i = 0; i < M; ++i) {
      const double pb = pbar_at(st[i]);
      const double rad = one_p0 * (R0 + pb) / A;
      c.x[i] = rad * cx[i] + p.p1 * theta0;
      c.y[i] = rad * cy[i] + p.p2 * theta0;
    }
    fft.derivative(c.x, c.xp, 1, period);
    fft.derivative(c.y, c.yp, 1, period);
    double mean_speed = 0.0;
    for (int i = 0; i < M; ++i) {
      c.speed[i] = std::hypot(c.xp[i], c.yp[i]);
      mean_speed += c.speed[i];
    }
    mean_speed /= M;
    // spectrally accurate cumulative arclength
    std::vector<double> fluct(M);
    fft.antiderivative(c.speed, fluct, period);
    for (int i = 0; i < M; ++i) st[i] = mean_speed * c.s[i] + fluct[i];
    const double total = mean_speed * period;
    const double A_new = A * total / target_length;
    // keep s_tilde consistent with the known total length while iterating
    const double rescale = target_length / total;
    for (int i = 0; i < M; ++i) st[i] *= rescale;
    const double dA = std::abs(A_new - A);
    A = A_new;
    double diff = 0.0;
    for (int i = 0; i < M; ++i) diff = std::max(diff, std::abs(st[i] - st_prev[i]));
    if (trivial || (diff < opts.fixed_point_tol && dA < opts.fixed_point_tol)) break;
    if (it == opts.max_fixed_point_iterations - 1)
      throw std::runtime_error("build_curve: fixed point did not converge after " +
                               std::to_string(iterations) + " iterations");
  }
  c.fixed_point_iterations = iterations;
  c.A_norm = A;

  // final geometry with the converged (s_tilde, A)
  for (int i = 0; i < M; ++i) {
    const double pb = pbar_at(st[i]);
    const double rad = one_p0 * (R0 + pb) / A;
    c.x[i] = rad * cx[i] + p.p1 * theta0;
    c.y[i] = rad * cy[i] + p.p2 * theta0;
  }
  fft.derivative(c.x, c.xp, 1, period);
  fft.derivative(c.y, c.yp, 1, period);
  c.xpp.resize(M);
  c.ypp.resize(M);
  fft.derivative(c.x, c.xpp, 2, period);
  fft.derivative(c.y, c.ypp, 2, period);
  c.nx.resize(M);
  c.ny.resize(M);
  c.kappa.resize(M);
  double mean_speed = 0.0;
  for (int i = 0; i < M; ++i) {
    c.speed[i] = std::hypot(c.xp[i], c.yp[i]);
    if (c.speed[i] < 1e-8)
      throw std::runtime_error("build_curve: degenerate parameterization speed");
    mean_speed += c.speed[i];
    // n = e^{-pi R/2} gamma' / |gamma'| = (y', -x')/|gamma'|
    c.nx[i] = c.yp[i] / c.speed[i];
    c.ny[i] = -c.xp[i] / c.speed[i];
    c.kappa[i] =
        (c.xpp[i] * c.nx[i] + c.ypp[i] * c.ny[i]) / (c.speed[i] * c.speed[i]);
  }
  mean_speed /= M;
  c.s_tilde.resize(M);
  std::vector<double> fluct(M);
  fft.antiderivative(c.speed, fluct, period);
  for (int i = 0; i < M; ++i) c.s_tilde[i] = mean_speed * c.s[i] + fluct[i];
  c.total_length = mean_speed * period;

  // separation test: pairs with periodic parameter distance > 1/(2K)
  if (opts.check_self_intersection) {
    double K = 1.0;
    for (int i = 0; i < M; ++i)
      K = std::max({K, c.speed[i], std::hypot(c.xpp[i], c.ypp[i])});
    const double sep_param = 1.0 / (2.0 * K);
    double dmin = std::numeric_limits<double>::max();
    for (int i = 0; i < M; ++i) {
      for (int j = i + 1; j < M; ++j) {
        const double dpar = std::min(c.s[j] - c.s[i], period - (c.s[j] - c.s[i]));
        if (dpar <= sep_param) continue;
        const double d = std::hypot(c.x[j] - c.x[i], c.y[j] - c.y[i]);
        dmin = std::min(dmin, d);
      }
    }
    c.min_separation = (dmin == std::numeric_limits<double>::max()) ? 0.0 : dmin;
    const double floor =
        (opts.separation_floor > 0.0) ? opts.separation_floor : 1e-3 * R0;
    if (c.min_separation < floor)
      throw std::runtime_error("build_curve: self-intersection within resolution");
  }
  return c;
}

std::vector<double> curvature(const CurveSamples& c) { return c.kappa; }

std::vector<double> arc_derivative(const CurveSamples& c,
                                   std::span<const double> f, int order) {
  const double period = 2.0 * kPi * c.R0;
  Fft1D& fft = fft1d_cache(c.M);
  std::vector<double> cur(f.begin(), f.end()), tmp(c.M);
  for (int o = 0; o < order; ++o) {
    fft.derivative(cur, tmp, 1, period);
    for (int i = 0; i < c.M; ++i) cur[i] = tmp[i] / c.speed[i];
  }
  return cur;
}

GalerkinResult galerkin_project(const CurveSamples& c, std::span<const double> f,
                                const ModeBasis& basis) {
  const int N1 = basis.N1;
  const double ds = 2.0 * kPi * c.R0 / c.M;
  const double one_p0 = 1.0 + c.p.p0;
  GalerkinResult out;
  out.coefficients.assign(N1, 0.0);
  for (int j = 0; j < N1; ++j) {
    double acc = 0.0;
    for (int i = 0; i < c.M; ++i)
      acc += f[i] * basis.theta_tilde(j, c.s_tilde[i], c.p.p0) * c.speed[i];
    out.coefficients[j] = acc * ds / one_p0;
  }
  out.reconstruction.assign(c.M, 0.0);
  for (int i = 0; i < c.M; ++i) {
    double acc = 0.0;
    for (int j = 0; j < N1; ++j)
      acc += out.coefficients[j] * basis.theta_tilde(j, c.s_tilde[i], c.p.p0);
    out.reconstruction[i] = acc;
  }
  return out;
}

CurvatureProjections curvature_projections(const CurveSamples& c,
                                           const ModeBasis& basis, double alpha) {
  const int N1 = basis.N1;
  const double ds = 2.0 * kPi * c.R0 / c.M;
  const std::vector<double> lap_kappa = arc_derivative(c, c.kappa, 2);
  CurvatureProjections out;
  out.A.assign(N1, 0.0);
  out.B.assign(N1, 0.0);
  for (int j = 0; j < N1; ++j) {
    double a = 0.0, b = 0.0;
    for (int i = 0; i < c.M; ++i) {
      const double th = basis.theta_tilde(j, c.s_tilde[i], c.p.p0);
      const double w = th * c.speed[i] * ds;
      const double k = c.kappa[i];
      a += k * w;
      b += (-lap_kappa[i] - 0.5 * k * k * k + alpha * k) * w;
    }
    out.A[j] = a;
    out.B[j] = b;
  }
  return out;
}

XiFunctions xi_functions(const CurveSamples& c, const MeanderParams& p,
                         const ModeBasis& basis) {
  const int N1 = basis.N1;
  const int M = c.M;
  const double one_p0 = 1.0 + p.p0;
  const double theta0 = 1.0 / std::sqrt(2.0 * kPi * basis.R0);
  const double fd_step = 1e-6;

  // A(p) gradient by central differences through the fixed point.
  std::vector<double> dlnA(N1, 0.0);
  BuildOptions noCheck;
  noCheck.check_self_intersection = false;
  auto a_of = [&](const MeanderParams& q) {
    return build_curve(basis, q, M, noCheck).A_norm;
  };
  for (int j = 0; j < N1; ++j) {
    MeanderParams plus = p, minus = p;
    auto bump = [&](MeanderParams& q, double d) {
      if (j == 0)
        q.p0 += d;
      else if (j == 1)
        q.p1 += d;
      else if (j == 2)
        q.p2 += d;
      else
        q.p_hat[j - 3] += d;
    };
    bump(plus, fd_step);
    bump(minus, -fd_step);
    dlnA[j] = (a_of(plus) - a_of(minus)) / (2.0 * fd_step) / c.A_norm;
  }

  XiFunctions out;
  out.xi = Mat(N1, M);
  std::vector<double> pbar(M), pbar_prime(M), n0dotnp(M);
  for (int i = 0; i < M; ++i) {
    double pb = 0.0, pbp = 0.0;
    for (int j = 3; j < N1; ++j) {
      pb += p.p_hat[j - 3] * basis.theta_tilde(j, c.s_tilde[i], p.p0);
      pbp += p.p_hat[j - 3] * basis.theta_tilde_prime(j, c.s_tilde[i], p.p0);
    }
    pbar[i] = pb;
    pbar_prime[i] = pbp;
    const double n0x = std::cos(c.s[i] / basis.R0);
    const double n0y = std::sin(c.s[i] / basis.R0);
    n0dotnp[i] = n0x * c.nx[i] + n0y * c.ny[i];
  }
  for (int i = 0; i < M; ++i) {
    out.xi.at(0, i) = -((basis.R0 + pbar[i]) / c.A_norm *
                            (1.0 - one_p0 * dlnA[0]) -
                        c.s_tilde[i] * pbar_prime[i] / c.A_norm) *
                      n0dotnp[i];
    out.xi.at(1, i) = -theta0 * c.nx[i];
    out.xi.at(2, i) = -theta0 * c.ny[i];
    for (int j = 3; j < N1; ++j) {
      const double th = basis.theta_tilde(j, c.s_tilde[i], p.p0);
      out.xi.at(j, i) =
          -(th - one_p0 * dlnA[j] / c.A_norm * (basis.R0 + pbar[i])) * n0dotnp[i];
    }
  }

  // U_{jk} = (1+p0)^{-1} int s~ Theta~_j' Theta~_k ds~, rows j = 3..N1-1.
  out.U = Mat(N1 - 3, N1);
  const double ds = 2.0 * kPi * c.R0 / M;
  for (int j = 3; j < N1; ++j) {
    for (int k = 0; k < N1; ++k) {
      double acc = 0.0;
      for (int i = 0; i < M; ++i) {
        acc += c.s_tilde[i] * basis.theta_tilde_prime(j, c.s_tilde[i], p.p0) *
               basis.theta_tilde(k, c.s_tilde[i], p.p0) * c.speed[i];
      }
      out.U.at(j - 3, k) = acc * ds / one_p0;
    }
  }
  return out;
}

Mat u_matrix_base(const ModeBasis& basis, int M) {
  if (M <= 0) M = std::max(8 * basis.N1, 256);
  const MeanderParams p0 = MeanderParams::zero(basis.N1);
  const CurveSamples c = build_curve(basis, p0, M);
  const int N1 = basis.N1;
  Mat U(N1 - 3, N1);
  const double ds = 2.0 * kPi * basis.R0 / M;
  for (int j = 3; j < N1; ++j)
    for (int k = 0; k < N1; ++k) {
      double acc = 0.0;
      for (int i = 0; i < M; ++i)
        acc += c.s_tilde[i] * basis.theta_tilde_prime(j, c.s_tilde[i], 0.0) *
               basis.theta_tilde(k, c.s_tilde[i], 0.0) * c.speed[i];
      U.at(j - 3, k) = acc * ds;
    }
  return U;
}

std::optional<FootPoint> signed_distance(const CurveSamples& c, Vec2 q,
                                         double reach) {
  const double period = 2.0 * kPi * c.R0;
  // coarse nearest sample
  int best = 0;
  double bestd2 = std::numeric_limits<double>::max();
  for (int i = 0; i < c.M; ++i) {
    const double dx = q.x - c.x[i], dy = q.y - c.y[i];
    const double d2 = dx * dx + dy * dy;
    if (d2 < bestd2) {
      bestd2 = d2;
      best = i;
    }
  }
  const double coarse = std::sqrt(bestd2);
  if (coarse > reach + 2.0 * period / c.M) return std::nullopt;

  double s = c.s[best];
  bool converged = false;
  for (int it = 0; it < 12; ++it) {
    const Vec2 g = c.gamma_at(s);
    const Vec2 gp = c.gamma_prime_at(s);
    const Vec2 gpp = c.gamma_second_at(s);
    const double rx = q.x - g.x, ry = q.y - g.y;
    const double f = rx * gp.x + ry * gp.y;
    const double fp = -(gp.x * gp.x + gp.y * gp.y) + rx * gpp.x + ry * gpp.y;
    if (fp == 0.0) break;
    const double step = f / fp;
    s -= step;
    if (std::abs(step) < 1e-13 * period) {
      converged = true;
      break;
    }
  }
  if (!converged) s = c.s[best];  // fall back to the coarse minimum

  const Vec2 g = c.gamma_at(s);
  const Vec2 gp = c.gamma_prime_at(s);
  const double sp = std::hypot(gp.x, gp.y);
  if (sp < 1e-12) return std::nullopt;
  const double nxv = gp.y / sp, nyv = -gp.x / sp;
  const double r = (q.x - g.x) * nxv + (q.y - g.y) * nyv;
  if (std::abs(r) >= reach) return std::nullopt;
  FootPoint fp_out;
  fp_out.s = wrap_periodic(s, period);
  fp_out.r = r;
  return fp_out;
}

}  // namespace fch
