#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>
#include <vector>

#include "fch/curve.hpp"

using namespace fch;

namespace {
constexpr double kPi = std::numbers::pi;

double inner_ip(const CurveSamples& c, std::span<const double> f,
                std::span<const double> g) {
  // L2(I_p) inner product: int f g ds~
  const double ds = 2.0 * kPi * c.R0 / c.M;
  double acc = 0.0;
  for (int i = 0; i < c.M; ++i) acc += f[i] * g[i] * c.speed[i];
  return acc * ds;
}

std::vector<double> sample_mode(const CurveSamples& c, const ModeBasis& b, int j) {
  std::vector<double> out(c.M);
  for (int i = 0; i < c.M; ++i)
    out[i] = b.theta_tilde(j, c.s_tilde[i], c.p.p0);
  return out;
}
}  // namespace

TEST_CASE("base circle: curvature, normals, length") {
  const double R0 = 1.5;
  const ModeBasis basis = ModeBasis::make(R0, 17);
  const CurveSamples c = build_curve(basis, MeanderParams::zero(17), 256);
  CHECK(c.A_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.total_length == doctest::Approx(2 * kPi * R0).epsilon(1e-12));
  for (int i = 0; i < c.M; i += 17) {
    CHECK(c.kappa[i] == doctest::Approx(-1.0 / R0).epsilon(1e-10));
    // outward normal on the circle points along the position vector
    const double r = std::hypot(c.x[i], c.y[i]);
    CHECK(c.nx[i] == doctest::Approx(c.x[i] / r).epsilon(1e-10));
    CHECK(c.ny[i] == doctest::Approx(c.y[i] / r).epsilon(1e-10));
  }
}

TEST_CASE("pure p0 scales the circle") {
  const ModeBasis basis = ModeBasis::make(1.0, 17);
  MeanderParams p = MeanderParams::zero(17);
  p.p0 = 0.25;
  const CurveSamples c = build_curve(basis, p, 256);
  CHECK(c.total_length == doctest::Approx(2 * kPi * 1.25).epsilon(1e-10));
  for (int i = 0; i < c.M; i += 31)
    CHECK(std::hypot(c.x[i], c.y[i]) == doctest::Approx(1.25).epsilon(1e-10));
  CHECK(c.kappa[100] == doctest::Approx(-1.0 / 1.25).epsilon(1e-10));
}

TEST_CASE("translation moves the center only") {
  const ModeBasis basis = ModeBasis::make(1.0, 17);
  MeanderParams p = MeanderParams::zero(17);
  p.p1 = 0.3;
  p.p2 = -0.2;
  const CurveSamples c = build_curve(basis, p, 256);
  const double theta0 = 1.0 / std::sqrt(2 * kPi);
  double cx = 0, cy = 0;
  for (int i = 0; i < c.M; ++i) {
    cx += c.x[i];
    cy += c.y[i];
  }
  CHECK(cx / c.M == doctest::Approx(0.3 * theta0).epsilon(1e-10));
  CHECK(cy / c.M == doctest::Approx(-0.2 * theta0).epsilon(1e-10));
  CHECK(c.total_length == doctest::Approx(2 * kPi).epsilon(1e-10));
}

TEST_CASE("A(p) - 1 is quadratic in the mode amplitude") {
  const ModeBasis basis = ModeBasis::make(1.0, 17);
  auto a_of = [&](double amp) {
    MeanderParams p = MeanderParams::zero(17);
    p.p_hat[2] = amp;  // j = 5: cos(3 s), beta = 3
    return build_curve(basis, p, 256).A_norm;
  };
  const double a1 = a_of(0.08) - 1.0;
  const double a2 = a_of(0.04) - 1.0;
  CHECK(a1 / a2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("orthogonality of the scaled modes on built curves") {
  const int N1 = 13;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  MeanderParams p = MeanderParams::zero(N1);
  p.p0 = 0.1;
  p.p_hat[0] = 0.03;  // j=3: cos(2 s)
  p.p_hat[3] = -0.02; // j=6: sin(3 s)
  const CurveSamples c = build_curve(basis, p, 512);
  for (int j = 0; j < N1; ++j) {
    const std::vector<double> tj = sample_mode(c, basis, j);
    for (int k = j; k < N1; ++k) {
      const std::vector<double> tk = sample_mode(c, basis, k);
      const double expected = (j == k) ? 1.1 : 0.0;
      CHECK(std::abs(inner_ip(c, tj, tk) - expected) < 1e-8);
    }
  }
}

TEST_CASE("scaled modes satisfy their Laplace-Beltrami eigenrelation") {
  const int N1 = 13;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  MeanderParams p = MeanderParams::zero(N1);
  p.p0 = 0.07;
  p.p_hat[1] = 0.02;
  const CurveSamples c = build_curve(basis, p, 512);
  for (int j : {1, 4, 9}) {
    const std::vector<double> tj = sample_mode(c, basis, j);
    const std::vector<double> lap = arc_derivative(c, tj, 2);
    const double beta_pj = basis.beta[j] / (1.0 * (1.0 + p.p0));
    double err = 0.0;
    for (int i = 0; i < c.M; ++i)
      err = std::max(err, std::abs(lap[i] + beta_pj * beta_pj * tj[i]));
    CHECK(err < 1e-6);
  }
}

TEST_CASE("curvature linearization and quadratic remainder scaling") {
  const int N1 = 17;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  auto remainder = [&](double amp) {
    MeanderParams p = MeanderParams::zero(N1);
    p.p_hat[4] = amp;  // j = 7: cos(4 s), beta = 4
    const CurveSamples c = build_curve(basis, p, 512);
    const double beta2 = 16.0;
    double acc = 0.0;
    const double ds = 2 * kPi / c.M;
    for (int i = 0; i < c.M; ++i) {
      const double q1 = (1.0 - beta2) * amp *
                        basis.theta_tilde(7, c.s_tilde[i], 0.0);
      const double lin = -1.0 + q1;  // kappa_{p,0} + Q1 at p0 = 0, R0 = 1
      const double r = c.kappa[i] - lin;
      acc += r * r * c.speed[i] * ds;
    }
    return std::sqrt(acc);
  };
  const double r1 = remainder(0.02);
  const double r2 = remainder(0.01);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("galerkin projection: orthogonality, mass, idempotence, adjointness") {
  const int N1 = 13;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  MeanderParams p = MeanderParams::zero(N1);
  p.p0 = 0.05;
  p.p_hat[2] = 0.02;
  const CurveSamples c = build_curve(basis, p, 512);

  // f = Theta~_k -> unit coefficient at k
  const std::vector<double> t4 = sample_mode(c, basis, 4);
  const GalerkinResult g4 = galerkin_project(c, t4, basis);
  for (int j = 0; j < N1; ++j)
    CHECK(std::abs(g4.coefficients[j] - (j == 4 ? 1.0 : 0.0)) < 1e-8);

  // constant -> only the j = 0 coefficient
  std::vector<double> ones(c.M, 2.5);
  const GalerkinResult g0 = galerkin_project(c, ones, basis);
  CHECK(g0.coefficients[0] ==
        doctest::Approx(2.5 * std::sqrt(2 * kPi)).epsilon(1e-10));
  for (int j = 1; j < N1; ++j) CHECK(std::abs(g0.coefficients[j]) < 1e-9);

  // idempotence on a generic sample
  std::vector<double> f(c.M);
  for (int i = 0; i < c.M; ++i)
    f[i] = std::sin(3 * c.s[i]) + 0.2 * std::cos(7 * c.s[i]) + 0.1;
  const GalerkinResult once = galerkin_project(c, f, basis);
  const GalerkinResult twice = galerkin_project(c, once.reconstruction, basis);
  for (int j = 0; j < N1; ++j)
    CHECK(std::abs(once.coefficients[j] - twice.coefficients[j]) < 1e-10);

  // self-adjointness in the I_p inner product
  std::vector<double> gfun(c.M);
  for (int i = 0; i < c.M; ++i) gfun[i] = std::cos(5 * c.s[i]) - 0.3;
  const GalerkinResult pg = galerkin_project(c, gfun, basis);
  CHECK(std::abs(inner_ip(c, once.reconstruction, gfun) -
                 inner_ip(c, f, pg.reconstruction)) < 1e-10);
}

TEST_CASE("curvature projections against the appendix identities") {
  const int N1 = 17;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  const double theta0 = 1.0 / std::sqrt(2 * kPi);

  // circle: A_0 = -2 pi Theta0, B_0 = 2 pi Theta0 (1/(2 R0^2 (1+p0)^2) - alpha)
  MeanderParams p = MeanderParams::zero(N1);
  p.p0 = 0.1;
  const CurveSamples circ = build_curve(basis, p, 512);
  const double alpha = 0.3;
  const CurvatureProjections cp = curvature_projections(circ, basis, alpha);
  CHECK(cp.A[0] == doctest::Approx(-2 * kPi * theta0).epsilon(1e-10));
  for (int j = 1; j < N1; ++j) CHECK(std::abs(cp.A[j]) < 1e-9);
  CHECK(cp.B[0] == doctest::Approx(2 * kPi * theta0 *
                                   (0.5 / (1.21) - alpha)).epsilon(1e-9));

  // single mode: A_k + (beta_k^2 - 1) a / R0^2 = O(a^2), verified by halving
  auto defect = [&](double a) {
    MeanderParams q = MeanderParams::zero(N1);
    q.p_hat[2] = a;  // j = 5: cos(3s), beta = 3
    const CurveSamples c = build_curve(basis, q, 512);
    const CurvatureProjections proj = curvature_projections(c, basis, 0.0);
    return proj.A[5] + (9.0 - 1.0) * a / 1.0;
  };
  const double d1 = defect(0.02);
  const double d2 = defect(0.01);
  // at least quadratic; a single mode has no same-wavenumber quadratic
  // interaction so the measured defect is in fact cubic
  CHECK(d1 / d2 >= 3.5);
}

TEST_CASE("xi functions at p = 0 and the U matrix bound") {
  const int N1 = 13;
  const ModeBasis basis = ModeBasis::make(1.3, N1);
  const MeanderParams p = MeanderParams::zero(N1);
  const CurveSamples c = build_curve(basis, p, 512);
  const XiFunctions xf = xi_functions(c, p, basis);

  // xi_0 = -R0 everywhere
  for (int i = 0; i < c.M; i += 37)
    CHECK(xf.xi.at(0, i) == doctest::Approx(-1.3).epsilon(1e-8));

  // -int xi_j Theta~_k ds~ = delta_{jk} over the shape block (p0 = 0)
  const double ds = 2 * kPi * 1.3 / c.M;
  for (int j = 3; j < N1; ++j) {
    for (int k = 3; k < N1; ++k) {
      double acc = 0.0;
      for (int i = 0; i < c.M; ++i)
        acc -= xf.xi.at(j, i) * basis.theta_tilde(k, c.s_tilde[i], 0.0) *
               c.speed[i] * ds;
      CHECK(std::abs(acc - (j == k ? 1.0 : 0.0)) < 1e-8);
    }
  }

  // translation rows carry the Theta0 E_j . n0 = Theta_j / sqrt(2) projection
  for (int j : {1, 2}) {
    double acc = 0.0;
    for (int i = 0; i < c.M; ++i)
      acc -= xf.xi.at(j, i) * basis.theta_tilde(j, c.s_tilde[i], 0.0) *
             c.speed[i] * ds;
    CHECK(acc == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  }

  // ||U^T|| <= C ||D^{1/2}||: spectral norm via power iteration on U U^T
  const int rows = N1 - 3;
  std::vector<double> v(rows, 1.0);
  double norm = 0.0;
  for (int it = 0; it < 200; ++it) {
    // w = U^T v (length N1), then v = U w
    std::vector<double> w(N1, 0.0);
    for (int j = 0; j < rows; ++j)
      for (int k = 0; k < N1; ++k) w[k] += xf.U.at(j, k) * v[j];
    std::vector<double> nv(rows, 0.0);
    for (int j = 0; j < rows; ++j)
      for (int k = 0; k < N1; ++k) nv[j] += xf.U.at(j, k) * w[k];
    double s = 0.0;
    for (double x : nv) s += x * x;
    s = std::sqrt(s);
    for (int j = 0; j < rows; ++j) v[j] = nv[j] / s;
    norm = std::sqrt(s);
  }
  const double d_half = basis.beta[N1 - 1];  // ||D^{1/2}|| = beta_max
  CHECK(norm <= 2.0 * std::numbers::pi * d_half);
}

TEST_CASE("signed distance on circles") {
  const ModeBasis basis = ModeBasis::make(1.0, 13);
  const CurveSamples c = build_curve(basis, MeanderParams::zero(13), 512);

  const auto hit = signed_distance(c, {1.3, 0.0}, 0.6);
  REQUIRE(hit.has_value());
  CHECK(hit->r == doctest::Approx(0.3).epsilon(1e-8));
  const double smod = std::fmod(hit->s, 2 * kPi);
  CHECK(std::min(smod, 2 * kPi - smod) < 1e-6);

  const double ang = 2.1;
  const auto hit2 = signed_distance(
      c, {0.8 * std::cos(ang), 0.8 * std::sin(ang)}, 0.6);
  REQUIRE(hit2.has_value());
  CHECK(hit2->r == doctest::Approx(-0.2).epsilon(1e-7));
  CHECK(hit2->s == doctest::Approx(ang).epsilon(1e-6));

  const auto on_curve = signed_distance(c, {0.0, 1.0}, 0.5);
  REQUIRE(on_curve.has_value());
  CHECK(std::abs(on_curve->r) < 1e-10);

  CHECK(!signed_distance(c, {0.0, 0.0}, 0.8).has_value());
}

TEST_CASE("weighted norms and embeddings") {
  const int N1 = 23;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    MeanderParams p = MeanderParams::zero(N1);
    for (double& x : p.p_hat) x = 0.01 * unif(rng);
    // ||p||_{V0^2} = ||p||_{l2}
    double l2 = 0.0, l1 = 0.0;
    for (double x : p.p_hat) {
      l2 += x * x;
      l1 += std::abs(x);
    }
    l2 = std::sqrt(l2);
    CHECK(p.norm_v(basis, 0, 2) == doctest::Approx(l2).epsilon(1e-12));
    // l1 <= sqrt(m) l2
    CHECK(l1 <= std::sqrt(static_cast<double>(p.p_hat.size())) * l2 + 1e-14);
    // ||p||_{V_k} <= C ||p||_{V_{k+1}^2} with C = sum beta^{-2} bounded
    for (int k = 0; k <= 4; ++k) {
      double csum = 0.0;
      for (size_t i = 0; i < p.p_hat.size(); ++i)
        csum += 1.0 / (basis.beta[i + 3] * basis.beta[i + 3]);
      CHECK(p.norm_v(basis, k, 1) <=
            std::sqrt(csum) * p.norm_v(basis, k + 1, 2) + 1e-14);
    }
  }
}

TEST_CASE("normal consistency: n_p . n0 - 1 is quadratic") {
  const int N1 = 17;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  auto dev = [&](double amp) {
    MeanderParams p = MeanderParams::zero(N1);
    p.p_hat[6] = amp;  // j = 9: cos(5s)
    const CurveSamples c = build_curve(basis, p, 512);
    double worst = 0.0;
    for (int i = 0; i < c.M; ++i) {
      const double n0x = std::cos(c.s[i]);
      const double n0y = std::sin(c.s[i]);
      worst = std::max(worst,
                       std::abs(1.0 - (n0x * c.nx[i] + n0y * c.ny[i])));
    }
    return worst;
  };
  CHECK(dev(0.02) / dev(0.01) == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("domain membership checks") {
  const int N1 = 13;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  MeanderParams p = MeanderParams::zero(N1);
  CHECK(p.in_domain(basis, 0.2));
  p.p0 = -0.6;
  CHECK(!p.in_domain(basis, 0.2));
  p.p0 = 0.0;
  p.p_hat[0] = 0.2;  // beta = 2: V1 norm = 0.4 > delta * C
  CHECK(!p.in_domain(basis, 0.2));
  CHECK(p.in_domain(basis, 0.5));
}

TEST_CASE("self-intersection detection on an extreme mode") {
  const int N1 = 13;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  MeanderParams p = MeanderParams::zero(N1);
  p.p_hat[6] = 1.1;  // j = 9: huge cos(5s) amplitude folds the curve
  BuildOptions opts;
  CHECK_THROWS_AS(build_curve(basis, p, 512, opts), std::runtime_error);
}

TEST_CASE("Weyl-count helper for N1") {
  // rho^{1/4} R0 / eps wavenumbers on each side plus the constant mode
  CHECK(ModeBasis::n1_from_spectral(0.1, 0.01, 1.0) == 2 * 3 + 1);
  CHECK(ModeBasis::n1_from_spectral(0.05, 0.0625, 1.0) == 2 * 10 + 1);
}
