#include <doctest.h>

#include <cmath>
#include <vector>

#include "fch/numerics.hpp"
#include "fch/profile.hpp"
#include "fch/well.hpp"

using namespace fch;

namespace {

const WellSpec kWell = WellSpec::default_tilted();

Profile1D default_profile(int n = 4097) {
  return build_phi0(kWell, default_half_width(kWell), n);
}

// Independent oracle: RK4 shooting of phi'' = W'(phi) from (u*, 0), seeded by
// the quartic Taylor step to leave the degenerate initial point.
std::vector<double> shoot_phi0(const WellSpec& w, std::span<const double> z_out) {
  const double us = validate_well(w).turning_point;
  const double h = 2.5e-4;
  auto rhs = [&](double phi) { return eval_well(w, phi, 1); };
  // Taylor start at z0 = h
  const double w1 = eval_well(w, us, 1);
  const double w2 = eval_well(w, us, 2);
  double z = h;
  double phi = us + 0.5 * w1 * h * h + w2 * w1 * h * h * h * h / 24.0;
  double dphi = w1 * h + w2 * w1 * h * h * h / 6.0;
  std::vector<double> out;
  size_t j = 0;
  const double zmax = z_out.back() + h;
  while (j < z_out.size() && z_out[j] <= z + 1e-15) {
    out.push_back(phi);  // z_out values below the Taylor start (z ~ 0)
    ++j;
  }
  while (z <= zmax && j < z_out.size()) {
    // classical RK4 on (phi, dphi)
    const double k1p = dphi, k1v = rhs(phi);
    const double k2p = dphi + 0.5 * h * k1v, k2v = rhs(phi + 0.5 * h * k1p);
    const double k3p = dphi + 0.5 * h * k2v, k3v = rhs(phi + 0.5 * h * k2p);
    const double k4p = dphi + h * k3v, k4v = rhs(phi + h * k3p);
    const double phi_new = phi + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    const double dphi_new = dphi + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    const double z_new = z + h;
    while (j < z_out.size() && z_out[j] <= z_new + 1e-15) {
      const double t = (z_out[j] - z) / h;  // linear blend inside one fine step
      out.push_back(phi * (1 - t) + phi_new * t);
      ++j;
    }
    phi = phi_new;
    dphi = dphi_new;
    z = z_new;
  }
  while (j++ < z_out.size()) out.push_back(phi);
  return out;
}

}  // namespace

TEST_CASE("phi0 center value is the turning point") {
  const Profile1D p = default_profile();
  const int mid = static_cast<int>(p.z.size()) / 2;
  const double u_star = (1.8 - std::sqrt(0.84)) / 2.0;
  CHECK(p.z[mid] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.phi0[mid] == doctest::Approx(u_star).epsilon(1e-12));
}

TEST_CASE("phi0 quadrature agrees with the RK4 shooting oracle") {
  const Profile1D p = default_profile();
  const int n = static_cast<int>(p.z.size());
  const int mid = n / 2;
  std::vector<double> z_pos(p.z.begin() + mid, p.z.end());
  const std::vector<double> shot = shoot_phi0(kWell, z_pos);
  double sup = 0.0;
  for (size_t i = 0; i < z_pos.size(); ++i)
    sup = std::max(sup, std::abs(shot[i] - p.phi0[mid + i]));
  CHECK(sup < 1e-6);
}

TEST_CASE("phi0 is even by construction") {
  const Profile1D p = default_profile(2049);
  const int n = static_cast<int>(p.z.size());
  for (int i = 0; i < n; ++i) {
    CHECK(p.phi0[i] == p.phi0[n - 1 - i]);
    CHECK(p.phi0_prime[i] == -p.phi0_prime[n - 1 - i]);
  }
}

TEST_CASE("first integral residual against the sampled derivative") {
  const Profile1D p = default_profile();
  const double h = p.dz();
  double sup = 0.0;
  // 4th-order finite difference of the stored samples vs 2 W(phi0)
  for (size_t i = 2; i + 2 < p.z.size(); ++i) {
    const double d = (-p.phi0[i + 2] + 8 * p.phi0[i + 1] - 8 * p.phi0[i - 1] +
                      p.phi0[i - 2]) /
                     (12 * h);
    sup = std::max(sup, std::abs(d * d - 2.0 * eval_well(kWell, p.phi0[i], 0)));
  }
  CHECK(sup < 1e-8);
}

TEST_CASE("exponential tail rate at least 0.95 sqrt(W''(b-))") {
  const Profile1D p = default_profile();
  std::vector<double> zs, logs;
  for (size_t i = 0; i < p.z.size(); ++i) {
    if (p.z[i] >= 3.0 && p.z[i] <= p.half_width - 1.0) {
      zs.push_back(p.z[i]);
      logs.push_back(std::log(p.phi0[i] - p.far_field));
    }
  }
  const double rate = -fit_line(zs, logs).slope;
  CHECK(rate > 0.95 * std::sqrt(3.4));
}

TEST_CASE("moments: Richardson stability and the phi-space oracle") {
  const Profile1D p1 = default_profile(2049);
  const Profile1D p2 = default_profile(4097);
  const ScalarConstants c1 = moments(p1);
  const ScalarConstants c2 = moments(p2);
  CHECK(std::abs(c1.m0 - c2.m0) < 1e-8 * c2.m0);
  CHECK(std::abs(c1.m1 - c2.m1) < 1e-8 * c2.m1);

  // phi-space oracle: m0 = int_{b-}^{u*} (phi - b-) 2 dphi / sqrt(2 W(phi)),
  // with the u* end handled by phi = u* - s^2 and the b- end by the linear
  // decay of sqrt(2W); composite Simpson on a fine s grid plus tail formula.
  const double us = validate_well(kWell).turning_point;
  const double bm = kWell.b_minus;
  const int ns = 200001;
  const double smax = std::sqrt(us - bm);
  std::vector<double> f(ns);
  for (int i = 0; i < ns; ++i) {
    const double s = smax * i / (ns - 1);
    const double phi = us - s * s;
    const double w = eval_well(kWell, phi, 0);
    if (i == 0) {
      f[i] = 2.0 * (us - bm) * 0.0;  // integrand ~ s * (...) -> 0 handled below
    }
    const double sp = std::sqrt(std::max(0.0, 2.0 * w));
    f[i] = (sp > 1e-14) ? (phi - bm) * 2.0 * (2.0 * s) / sp : 0.0;
  }
  // i = 0 limit: (u*-b-) * 4 s / (s sqrt(2|W'(u*)|)) -> 4 (u*-b-)/sqrt(2|W'|)
  f[0] = 4.0 * (us - bm) / std::sqrt(2.0 * std::abs(eval_well(kWell, us, 1)));
  // s = smax limit: phi -> b-, integrand -> 4 s / sqrt(W''(b-)) per unit s
  f[ns - 1] = 4.0 * smax / std::sqrt(3.4);
  const double m0_oracle = simpson(f, smax / (ns - 1));
  // truncation of the z-domain loses the exponential tail only
  CHECK(std::abs(c2.m0 - m0_oracle) < 5e-5 * m0_oracle);

  // m1^2 = int (phi0')^2 dz cross-checked against int 2 W(phi0) dz
  std::vector<double> w2(p2.z.size());
  for (size_t i = 0; i < w2.size(); ++i)
    w2[i] = 2.0 * eval_well(kWell, p2.phi0[i], 0);
  const double m1sq_w = simpson(w2, p2.dz());
  CHECK(std::abs(c2.m1 * c2.m1 - m1sq_w) < 1e-8 * m1sq_w);
}

TEST_CASE("degenerate profile has zero moments") {
  Profile1D p;
  p.far_field = -1.0;
  p.half_width = 5.0;
  const int n = 1001;
  p.z.resize(n);
  p.phi0.assign(n, -1.0);
  p.phi0_prime.assign(n, 0.0);
  for (int i = 0; i < n; ++i) p.z[i] = -5.0 + 10.0 * i / (n - 1);
  const ScalarConstants c = moments(p);
  CHECK(c.m0 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c.m1 == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("ground state: negative eigenvalue, small residual, even, oracle") {
  const Profile1D p = default_profile(2049);
  const LineOperator L = build_line_operator(kWell, p);
  const GroundState gs = ground_state(L);
  CHECK(gs.lambda0 < 0.0);
  // residual in L2(h)
  const std::vector<double> Aw = apply_l0(L, gs.psi0);
  double acc = 0.0;
  for (size_t i = 0; i < Aw.size(); ++i) {
    const double r = Aw[i] - gs.lambda0 * gs.psi0[i];
    acc += r * r;
  }
  CHECK(std::sqrt(acc * L.h) < 1e-8);
  // evenness
  const size_t n = gs.psi0.size();
  double odd = 0.0;
  for (size_t i = 0; i < n; ++i)
    odd = std::max(odd, std::abs(gs.psi0[i] - gs.psi0[n - 1 - i]));
  CHECK(odd < 1e-6);
  CHECK(gs.psi0[n / 2] > 0.0);
  // Sturm-sequence bisection oracle
  const double lam_oracle = smallest_eigenvalue_bisection(L, -5.0, 0.0, 1e-11);
  CHECK(gs.lambda0 == doctest::Approx(lam_oracle).epsilon(1e-9));
}

TEST_CASE("kernel mode: ||L0 phi0'|| decays at second order") {
  // doubled domain so the end-tail truncation sits below the h^2 signal
  std::vector<double> hs, rs;
  for (int n : {1025, 2049, 4097}) {
    const Profile1D p = build_phi0(kWell, 2.0 * default_half_width(kWell), n);
    const LineOperator L = build_line_operator(kWell, p);
    const std::vector<double> Ak = apply_l0(L, p.phi0_prime);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < Ak.size(); ++i) {
      num += Ak[i] * Ak[i];
      den += p.phi0_prime[i] * p.phi0_prime[i];
    }
    hs.push_back(std::log(L.h));
    rs.push_back(std::log(std::sqrt(num / den)));
  }
  const double slope = fit_line(hs, rs).slope;
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("solve_l0: B2 far field, round trip, kernel rejection, parity") {
  const Profile1D p = default_profile(2049);
  const LineOperator L = build_line_operator(kWell, p);
  const size_t n = p.z.size();

  // B_k = L0^{-k} 1 with far field W''(b-)^{-k}; the default truncation
  // leaves an exponential tail ~1e-4 at the ends, a doubled domain is clean
  std::vector<double> ones(n, 1.0);
  const std::vector<double> b2 = solve_l0(L, ones, 2);
  CHECK(b2.front() == doctest::Approx(1.0 / (3.4 * 3.4)).epsilon(3e-4));
  CHECK(b2.back() == doctest::Approx(1.0 / (3.4 * 3.4)).epsilon(3e-4));
  {
    const Profile1D pw = build_phi0(kWell, 2.0 * default_half_width(kWell), 4097);
    const LineOperator Lw = build_line_operator(kWell, pw);
    std::vector<double> ones_w(pw.z.size(), 1.0);
    const std::vector<double> b2w = solve_l0(Lw, ones_w, 2);
    CHECK(b2w.front() == doctest::Approx(1.0 / (3.4 * 3.4)).epsilon(1e-7));
    CHECK(b2w.back() == doctest::Approx(1.0 / (3.4 * 3.4)).epsilon(1e-7));
  }

  // round trip on a kernel-orthogonal localized f
  std::vector<double> f(n);
  for (size_t i = 0; i < n; ++i) f[i] = std::exp(-p.z[i] * p.z[i]);
  const std::vector<double> u = solve_l0(L, f, 1);
  std::vector<double> dev(n);
  for (size_t i = 0; i < n; ++i) dev[i] = u[i] - f.front() / 3.4;
  const std::vector<double> back = apply_l0(L, dev);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double g = f[i] - L.potential[i] * (f.front() / 3.4);
    num += (back[i] - g) * (back[i] - g);
    den += g * g;
  }
  CHECK(std::sqrt(num / den) < 1e-9);

  // kernel direction projected to zero
  SolveReport rep;
  const std::vector<double> uk = solve_l0(L, p.phi0_prime, 1, &rep);
  CHECK(rep.projected);
  CHECK(max_abs(uk) < 1e-4);

  // parity: even input -> even output; odd input -> odd output
  std::vector<double> fe(n), fo(n);
  for (size_t i = 0; i < n; ++i) {
    fe[i] = std::exp(-0.5 * p.z[i] * p.z[i]);
    fo[i] = p.z[i] * std::exp(-0.5 * p.z[i] * p.z[i]);
  }
  const std::vector<double> ue = solve_l0(L, fe, 1);
  const std::vector<double> uo = solve_l0(L, fo, 1);
  double e_odd = 0.0, o_even = 0.0;
  for (size_t i = 0; i < n; ++i) {
    e_odd = std::max(e_odd, std::abs(ue[i] - ue[n - 1 - i]));
    o_even = std::max(o_even, std::abs(uo[i] + uo[n - 1 - i]));
  }
  CHECK(e_odd < 1e-10);
  CHECK(o_even < 1e-10);

  // z phi0' is even (z odd, phi0' odd), so L0^{-1}(z phi0') is even
  std::vector<double> zphi(n);
  for (size_t i = 0; i < n; ++i) zphi[i] = p.z[i] * p.phi0_prime[i];
  const std::vector<double> g = solve_l0(L, zphi, 1);
  double g_odd = 0.0;
  for (size_t i = 0; i < n; ++i)
    g_odd = std::max(g_odd, std::abs(g[i] - g[n - 1 - i]));
  CHECK(g_odd < 1e-10);
}

TEST_CASE("build_constants: sigma1*, eta sign, m2 stability") {
  const Profile1D pa = default_profile(2049);
  const LineOperator La = build_line_operator(kWell, pa);
  const ScalarConstants a = build_constants(pa, La, 1.45, 2.0);
  CHECK(a.sigma1_star ==
        doctest::Approx(-3.45 * a.m1 * a.m1 / (2.0 * a.m0)).epsilon(1e-14));
  const ScalarConstants b = build_constants(pa, La, 1.0, -1.0);
  CHECK(b.sigma1_star == doctest::Approx(0.0).epsilon(1e-14));
  const Profile1D pb1 = default_profile(16385);
  const LineOperator Lb1 = build_line_operator(kWell, pb1);
  const ScalarConstants cb1 = build_constants(pb1, Lb1, 1.45, 2.0);
  const Profile1D pb2 = default_profile(32769);
  const LineOperator Lb2 = build_line_operator(kWell, pb2);
  const ScalarConstants c = build_constants(pb2, Lb2, 1.45, 2.0);
  CHECK(std::abs(cb1.m2 - c.m2) < 1e-6);
  CHECK(a.lambda0 < 0.0);
  CHECK(a.b2_far == doctest::Approx(1.0 / (3.4 * 3.4)).epsilon(1e-12));
}

TEST_CASE("phi1 profile: degenerate and far-field cases") {
  const Profile1D p = default_profile(2049);
  const LineOperator L = build_line_operator(kWell, p);
  const ScalarConstants c = build_constants(p, L, 1.45, 2.0);

  const std::vector<double> zero = phi1_profile(c, L, p, 0.0, 0.0);
  CHECK(max_abs(zero) < 1e-12);

  std::vector<double> ones(p.z.size(), 1.0);
  const std::vector<double> b2 = solve_l0(L, ones, 2);
  const std::vector<double> just_b2 = phi1_profile(c, L, p, 1.0, 0.0);
  double diff = 0.0;
  for (size_t i = 0; i < b2.size(); ++i)
    diff = std::max(diff, std::abs(b2[i] - just_b2[i]));
  CHECK(diff < 1e-14);

  const std::vector<double> full = phi1_profile(c, L, p, c.sigma1_star, -0.55);
  CHECK(full.front() ==
        doctest::Approx(c.sigma1_star / (3.4 * 3.4)).epsilon(3e-4));
  CHECK(full.back() ==
        doctest::Approx(c.sigma1_star / (3.4 * 3.4)).epsilon(3e-4));
}

TEST_CASE("pearling check sign cases") {
  ScalarConstants c;
  c.sigma1_star = -0.5;
  c.lambda0 = -0.9;
  CHECK(pearling_check(c, 0.0, -0.55).stable);   // eta_d lambda0 > 0
  CHECK(!pearling_check(c, 0.0, 0.55).stable);   // eta_d lambda0 < 0
  CHECK(pearling_check(c, -1.0, 0.0).stable);    // S1 sigma1* > 0
}
