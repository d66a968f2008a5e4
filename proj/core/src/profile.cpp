#include "fch/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fch/numerics.hpp"

namespace fch {
namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

double gl8(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += kGlWeight[i] * f(mid + half * kGlNode[i]);
  return s * half;
}

std::vector<double> l2_normalized(std::vector<double> v, double h) {
  const double n = std::sqrt(dot(v, v) * h);
  for (double& x : v) x /= n;
  return v;
}

// One pivoted tridiagonal solve of (A - shift I) x = rhs for the Dirichlet
// deviation operator.
std::vector<double> shifted_solve(const LineOperator& L,
                                  std::span<const double> rhs, double shift) {
  const size_t n = L.potential.size();
  const double ih2 = 1.0 / (L.h * L.h);
  std::vector<double> sub(n - 1, -ih2), super(n - 1, -ih2), diag(n);
  for (size_t i = 0; i < n; ++i) diag[i] = 2.0 * ih2 + L.potential[i] - shift;
  return solve_tridiag(sub, diag, super, rhs);
}

void project_out(std::vector<double>& v, std::span<const double> dir, double h,
                 double* amount = nullptr) {
  const double c = dot(v, dir) * h;
  for (size_t i = 0; i < v.size(); ++i) v[i] -= c * dir[i];
  if (amount) *amount = c;
}

void antisymmetrize(std::vector<double>& v) {
  const size_t n = v.size();
  for (size_t i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (v[i] - v[n - 1 - i]);
    v[i] = a;
    v[n - 1 - i] = -a;
  }
  if (n % 2 == 1) v[n / 2] = 0.0;
}

void symmetrize(std::vector<double>& v) {
  const size_t n = v.size();
  for (size_t i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (v[i] + v[n - 1 - i]);
    v[i] = a;
    v[n - 1 - i] = a;
  }
}

}  // namespace

double default_half_width(const WellSpec& spec) {
  const double w2 = eval_well(spec, spec.b_minus, 2);
  return 12.0 / std::sqrt(w2);
}

Profile1D build_phi0(const WellSpec& spec, double half_width, int n) {
  const WellReport rep = validate_well(spec);
  if (!rep.ok) throw std::invalid_argument("build_phi0: invalid well: " + rep.violation);
  if (n < 512) throw std::invalid_argument("build_phi0: n must be >= 512");
  if (n % 2 == 0) ++n;  // grid must contain z = 0
  const double w2m = rep.w2_at_bminus;
  if (half_width < 8.0 / std::sqrt(w2m))
    throw std::invalid_argument("build_phi0: half_width below 8/sqrt(W''(b-))");

  const double bm = spec.b_minus;
  const double us = rep.turning_point;
  // deflate the double root at b- so W keeps relative precision in the tail:
  // W(u) = (u - b-)^2 Q~(u)
  std::vector<double> qt = well_coefficients(spec);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> q(qt.size() - 1, 0.0);
    double carry = 0.0;
    for (size_t k = qt.size(); k-- > 1;) {
      carry = qt[k] + bm * carry;
      q[k - 1] = carry;
    }
    qt = std::move(q);  // remainder ~ rounding; W(b-) = W'(b-) = 0 validated
  }
  auto W = [&](double u) {
    double acc = 0.0;
    for (size_t k = qt.size(); k-- > 0;) acc = acc * u + qt[k];
    const double d = u - bm;
    return d * d * acc;
  };
  auto speed = [&](double phi) { return std::sqrt(std::max(0.0, 2.0 * W(phi))); };

  // Coarse knots from the first-integral quadrature; every grid sample is
  // then Newton-refined against the exact relation z(phi) = z_i, so the
  // sampled profile is smooth to rounding.

  // Phase 1: phi = u* - s^2 (removes the inverse-sqrt singularity at u*).
  auto g = [&](double s) {
    const double phi = us - s * s;
    const double sp = speed(phi);
    if (sp > 1e-12) return 2.0 * s / sp;
    return 2.0 / std::sqrt(2.0 * std::abs(eval_well(spec, us, 1)));
  };
  const double phi_a = bm + 0.5 * (us - bm);
  const double s_a = std::sqrt(us - phi_a);
  const int n_a = 512;
  std::vector<double> sk{0.0}, zk_s{0.0};
  for (int i = 0; i < n_a; ++i) {
    const double s0 = s_a * i / n_a, s1 = s_a * (i + 1) / n_a;
    sk.push_back(s1);
    zk_s.push_back(zk_s.back() + gl8(g, s0, s1));
  }
  const double z_switch = zk_s.back();

  // Phase 2: geometric subdivision of phi toward b-.
  std::vector<double> fk{phi_a}, zk_f{z_switch};
  auto integrand = [&](double phi) { return 1.0 / speed(phi); };
  {
    const double ratio = 0.9;
    double phi_hi = phi_a;
    double zacc = z_switch;
    while (zacc < half_width + 1.0 && phi_hi - bm > 1e-306) {
      const double phi_lo = bm + ratio * (phi_hi - bm);
      zacc += gl8(integrand, phi_lo, phi_hi);
      fk.push_back(phi_lo);
      zk_f.push_back(zacc);
      phi_hi = phi_lo;
    }
  }

  auto lower_knot = [](const std::vector<double>& zs, double z) {
    auto it = std::upper_bound(zs.begin(), zs.end(), z);
    size_t i = static_cast<size_t>(it - zs.begin());
    return (i == 0) ? size_t{0} : i - 1;
  };

  // Solve z(phi) = z for one grid point.
  auto refine = [&](double z) -> double {
    if (z <= 0.0) return us;
    if (z <= z_switch) {
      // Newton in s on z(s) = z_knot + int_{s_k}^{s} g
      const size_t k = lower_knot(zk_s, z);
      double s = sk[k] + (z - zk_s[k]) / std::max(g(sk[k]), 1e-30);
      s = std::clamp(s, 0.0, s_a);
      for (int it = 0; it < 30; ++it) {
        const double zs = zk_s[k] + gl8(g, sk[k], s);
        const double step = (zs - z) / std::max(g(s), 1e-30);
        s -= step;
        s = std::clamp(s, 0.0, s_a);
        if (std::abs(step) < 1e-15 * (1.0 + s)) break;
      }
      return us - s * s;
    }
    const size_t k = lower_knot(zk_f, z);
    // Newton in phi on z(phi) = z_knot + int_phi^{phi_k} dv / speed(v),
    // bracketed by the knot interval so speed never degenerates.
    const double lo = (k + 1 < fk.size()) ? fk[k + 1] : bm + 1e-300;
    double phi = fk[k] - (z - zk_f[k]) * speed(fk[k]);
    phi = std::clamp(phi, lo, fk[k]);
    for (int it = 0; it < 60; ++it) {
      const double zf = zk_f[k] + gl8(integrand, phi, fk[k]);
      const double step = (zf - z) * speed(phi);
      phi += step;
      phi = std::clamp(phi, lo, fk[k]);
      if (std::abs(step) < 1e-16 * (us - bm)) break;
    }
    return phi;
  };

  Profile1D out;
  out.far_field = bm;
  out.turning_point = us;
  out.half_width = half_width;
  out.z.resize(n);
  out.phi0.resize(n);
  out.phi0_prime.resize(n);
  const int mid = n / 2;
  const double h = 2.0 * half_width / (n - 1);
  // switch to the linearized exponential tail once (phi - b-) <= 1e-8: the
  // quadratic model error is then below rounding
  size_t anchor = fk.size() - 1;
  for (size_t k = 0; k < fk.size(); ++k) {
    if (fk[k] - bm <= 1e-8) {
      anchor = std::max<size_t>(1, k) - 1;
      break;
    }
  }
  const double z_deep = zk_f[anchor];
  const double rate = std::sqrt(eval_well(spec, bm, 2));
  for (int i = mid; i < n; ++i) {
    const double z = h * (i - mid);
    out.z[i] = z;
    double phi;
    if (z >= z_deep) {
      phi = bm + (fk[anchor] - bm) * std::exp(-rate * (z - zk_f[anchor]));
    } else {
      phi = refine(z);
    }
    out.phi0[i] = phi;
    out.phi0_prime[i] = (i == mid) ? 0.0 : -speed(phi);
  }
  for (int i = 0; i < mid; ++i) {
    out.z[i] = -out.z[n - 1 - i];
    out.phi0[i] = out.phi0[n - 1 - i];
    out.phi0_prime[i] = -out.phi0_prime[n - 1 - i];
  }
  return out;
}

LineOperator build_line_operator(const WellSpec& spec, const Profile1D& p) {
  LineOperator L;
  L.z = p.z;
  L.h = p.dz();
  L.far_potential = eval_well(spec, p.far_field, 2);
  L.potential.resize(p.z.size());
  for (size_t i = 0; i < p.z.size(); ++i)
    L.potential[i] = eval_well(spec, p.phi0[i], 2);

  // Discrete near-kernel direction by inverse iteration with zero shift,
  // seeded with phi0' and antisymmetrized each sweep.
  std::vector<double> v = l2_normalized(p.phi0_prime, L.h);
  antisymmetrize(v);
  for (int it = 0; it < 6; ++it) {
    v = shifted_solve(L, v, 0.0);
    antisymmetrize(v);
    v = l2_normalized(std::move(v), L.h);
  }
  // sign convention: match phi0' at the first interior quarter
  if (dot(v, p.phi0_prime) < 0.0)
    for (double& x : v) x = -x;
  L.kernel = std::move(v);
  return L;
}

std::vector<double> apply_l0(const LineOperator& L, std::span<const double> u) {
  const size_t n = u.size();
  const double ih2 = 1.0 / (L.h * L.h);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    const double um = (i > 0) ? u[i - 1] : 0.0;
    const double up = (i + 1 < n) ? u[i + 1] : 0.0;
    out[i] = (2.0 * u[i] - um - up) * ih2 + L.potential[i] * u[i];
  }
  return out;
}

GroundState ground_state(const LineOperator& L) {
  GroundState gs;
  const size_t n = L.potential.size();
  double pot_max = 0.0;
  for (double p : L.potential) pot_max = std::max(pot_max, std::abs(p));
  const double op_norm = 4.0 / (L.h * L.h) + pot_max;
  const double tol = std::max(1e-12, 100.0 * 1e-16 * op_norm);
  double shift = *std::min_element(L.potential.begin(), L.potential.end()) - 0.5;
  std::vector<double> v(n, 1.0);
  symmetrize(v);
  v = l2_normalized(std::move(v), L.h);
  double lambda = shift;
  const int max_iter = 200;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> w = shifted_solve(L, v, shift);
    symmetrize(w);
    w = l2_normalized(std::move(w), L.h);
    const std::vector<double> Aw = apply_l0(L, w);
    const double lam = dot(Aw, w) * L.h;
    std::vector<double> res(n);
    for (size_t i = 0; i < n; ++i) res[i] = Aw[i] - lam * w[i];
    const double rnorm = std::sqrt(dot(res, res) * L.h);
    v = std::move(w);
    lambda = lam;
    gs.iterations = it + 1;
    if (rnorm < tol) break;
    if (it >= 3) shift = lam;  // Rayleigh refinement once roughly converged
    if (it == max_iter - 1)
      throw std::runtime_error("ground_state: inverse iteration did not converge");
  }
  if (v[n / 2] < 0.0)
    for (double& x : v) x = -x;
  gs.lambda0 = lambda;
  gs.psi0 = std::move(v);
  return gs;
}

int count_eigenvalues_below(const LineOperator& L, double x) {
  // Sturm sequence for the symmetric tridiagonal matrix.
  const size_t n = L.potential.size();
  const double ih2 = 1.0 / (L.h * L.h);
  const double off2 = ih2 * ih2;
  int count = 0;
  double d = 1.0;
  for (size_t i = 0; i < n; ++i) {
    const double diag = 2.0 * ih2 + L.potential[i] - x;
    d = (i == 0) ? diag : diag - off2 / d;
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
  }
  return count;
}

double smallest_eigenvalue_bisection(const LineOperator& L, double lo, double hi,
                                     double tol) {
  while (count_eigenvalues_below(L, lo) > 0) lo -= (hi - lo);
  while (count_eigenvalues_below(L, hi) < 1) hi += (hi - lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (count_eigenvalues_below(L, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> solve_l0(const LineOperator& L, std::span<const double> f,
                             int powers, SolveReport* report) {
  if (powers < 1) throw std::invalid_argument("solve_l0: powers must be >= 1");
  std::vector<double> cur(f.begin(), f.end());
  SolveReport rep;
  for (int p = 0; p < powers; ++p) {
    const double f_inf = 0.5 * (cur.front() + cur.back());
    const double u_inf = f_inf / L.far_potential;
    std::vector<double> g(cur.size());
    for (size_t i = 0; i < g.size(); ++i)
      g[i] = cur[i] - L.potential[i] * u_inf;
    double removed = 0.0;
    project_out(g, L.kernel, L.h, &removed);
    const double gn = std::sqrt(dot(g, g) * L.h);
    if (std::abs(removed) > 1e-10 * std::max(1.0, gn)) {
      rep.projected = true;
      rep.kernel_projection = std::max(rep.kernel_projection, std::abs(removed));
    }
    std::vector<double> v = shifted_solve(L, g, 0.0);
    project_out(v, L.kernel, L.h);
    for (size_t i = 0; i < v.size(); ++i) v[i] += u_inf;
    cur = std::move(v);
  }
  if (report) *report = rep;
  return cur;
}

ScalarConstants moments(const Profile1D& p) {
  ScalarConstants c;
  const double h = p.dz();
  const size_t n = p.z.size();
  std::vector<double> f(n);
  for (size_t i = 0; i < n; ++i) f[i] = p.phi0[i] - p.far_field;
  c.m0 = simpson(f, h);
  for (size_t i = 0; i < n; ++i) f[i] = p.phi0_prime[i] * p.phi0_prime[i];
  c.m1 = std::sqrt(simpson(f, h));
  for (size_t i = 0; i < n; ++i) {
    const double zf = p.z[i] * p.phi0_prime[i];
    f[i] = zf * zf;
  }
  c.m3 = 0.5 * simpson(f, h);
  return c;
}

ScalarConstants build_constants(const Profile1D& p, const LineOperator& L,
                                double eta1, double eta2) {
  ScalarConstants c = moments(p);
  const double h = p.dz();
  const size_t n = p.z.size();

  c.lambda0 = ground_state(L).lambda0;
  c.w2_bminus = L.far_potential;
  c.b2_far = 1.0 / (L.far_potential * L.far_potential);

  std::vector<double> zphi(n);
  for (size_t i = 0; i < n; ++i) zphi[i] = p.z[i] * p.phi0_prime[i];
  const std::vector<double> g = solve_l0(L, zphi, 1);
  c.m2 = 0.5 * simpson(g, h);

  std::vector<double> ones(n, 1.0);
  const std::vector<double> b2 = solve_l0(L, ones, 2);
  std::vector<double> excess(n);
  for (size_t i = 0; i < n; ++i) excess[i] = b2[i] - c.b2_far;
  c.b2_excess = simpson(excess, h);

  c.sigma1_star = -(eta1 + eta2) * c.m1 * c.m1 / (2.0 * c.m0);
  return c;
}

std::vector<double> phi1_profile(const ScalarConstants& c, const LineOperator& L,
                                 const Profile1D& p, double sigma, double eta_d) {
  (void)c;
  const size_t n = p.z.size();
  std::vector<double> ones(n, 1.0), zphi(n);
  for (size_t i = 0; i < n; ++i) zphi[i] = p.z[i] * p.phi0_prime[i];
  const std::vector<double> b2 = solve_l0(L, ones, 2);
  const std::vector<double> g = solve_l0(L, zphi, 1);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = sigma * b2[i] + 0.5 * eta_d * g[i];
  return out;
}

PearlingCheck pearling_check(const ScalarConstants& c, double S1, double eta_d) {
  PearlingCheck pc;
  pc.lhs = c.sigma1_star * S1 + eta_d * c.lambda0;
  pc.stable = pc.lhs > 0.0;
  return pc;
}

ProfileFamily build_profile_family(const WellSpec& spec, double eta1, double eta2,
                                   double half_width, int n) {
  ProfileFamily fam;
  fam.well = spec;
  fam.eta1 = eta1;
  fam.eta2 = eta2;
  fam.eta_d = eta1 - eta2;
  if (half_width <= 0.0) half_width = default_half_width(spec);
  fam.base = build_phi0(spec, half_width, n);
  fam.op = build_line_operator(spec, fam.base);
  fam.consts = build_constants(fam.base, fam.op, eta1, eta2);
  const size_t m = fam.base.z.size();
  std::vector<double> ones(m, 1.0), zphi(m);
  for (size_t i = 0; i < m; ++i) zphi[i] = fam.base.z[i] * fam.base.phi0_prime[i];
  fam.b2 = solve_l0(fam.op, ones, 2);
  const std::vector<double> g = solve_l0(fam.op, zphi, 1);
  fam.tilt_correction.resize(m);
  for (size_t i = 0; i < m; ++i) fam.tilt_correction[i] = 0.5 * g[i];
  return fam;
}

}  // namespace fch
