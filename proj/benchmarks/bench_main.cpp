#include <benchmark/benchmark.h>

#include <numbers>

#include "fch/experiments.hpp"

namespace {

constexpr double kPi = std::numbers::pi;
using namespace fch;

const WellSpec kWell = WellSpec::default_tilted();

const ProfileFamily& family() {
  static ProfileFamily fam = build_profile_family(kWell, 1.45, 2.0);
  return fam;
}

void BM_ProfileBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Profile1D p = build_phi0(kWell, default_half_width(kWell), n);
    benchmark::DoNotOptimize(p.phi0.data());
  }
}
BENCHMARK(BM_ProfileBuild)->Arg(2049)->Arg(4097);

void BM_CurveBuild(benchmark::State& state) {
  const int N1 = 33;
  const ModeBasis basis = ModeBasis::make(1.0, N1);
  MeanderParams p = MeanderParams::zero(N1);
  p.p0 = 0.05;
  p.p_hat[0] = 0.02;
  p.p_hat[7] = -0.01;
  BuildOptions opts;
  opts.check_self_intersection = false;
  for (auto _ : state) {
    CurveSamples c = build_curve(basis, p, static_cast<int>(state.range(0)), opts);
    benchmark::DoNotOptimize(c.kappa.data());
  }
}
BENCHMARK(BM_CurveBuild)->Arg(264)->Arg(512);

void BM_SpectralLaplacian(benchmark::State& state) {
  const Grid2D g{static_cast<int>(state.range(0)), kPi};
  Spectral2D sp(g);
  Field2D u(g, 0.1);
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix)
      u.at(iy, ix) = std::sin(g.x(ix)) * std::cos(2 * g.x(iy));
  for (auto _ : state) {
    Field2D lap = sp.laplacian(u);
    benchmark::DoNotOptimize(lap.v.data());
  }
}
BENCHMARK(BM_SpectralLaplacian)->Arg(128)->Arg(256);

void BM_ChemicalPotential(benchmark::State& state) {
  const Grid2D g{static_cast<int>(state.range(0)), kPi};
  Spectral2D sp(g);
  const ModeBasis basis = ModeBasis::make(1.3, 13);
  const CurveSamples curve = build_curve(basis, MeanderParams::zero(13), 256);
  const Field2D u = synthesize_bilayer(g, curve, family(), -0.7, 0.2, 0.6);
  for (auto _ : state) {
    Field2D f = chemical_potential(sp, u, kWell, 0.2, 1.45, 2.0);
    benchmark::DoNotOptimize(f.v.data());
  }
}
BENCHMARK(BM_ChemicalPotential)->Arg(128)->Arg(256);

void BM_PdeStep(benchmark::State& state) {
  const Grid2D g{static_cast<int>(state.range(0)), kPi};
  const ModeBasis basis = ModeBasis::make(1.3, 13);
  const CurveSamples curve = build_curve(basis, MeanderParams::zero(13), 256);
  Field2D u = synthesize_bilayer(g, curve, family(), -0.7, 0.2, 0.6);
  PdeConfig cfg;
  cfg.eps = 0.2;
  cfg.dt = 0.02;
  PdeFlow flow(g, kWell, cfg);
  for (auto _ : state) {
    flow.step(u);
    benchmark::DoNotOptimize(u.v.data());
  }
}
BENCHMARK(BM_PdeStep)->Arg(128)->Arg(256);

void BM_SignedDistanceField(benchmark::State& state) {
  const Grid2D g{static_cast<int>(state.range(0)), kPi};
  const ModeBasis basis = ModeBasis::make(1.3, 13);
  const CurveSamples curve = build_curve(basis, MeanderParams::zero(13), 256);
  for (auto _ : state) {
    TubeField tf = signed_distance_field(g, curve, 1.2);
    benchmark::DoNotOptimize(tf.r.data());
  }
}
BENCHMARK(BM_SignedDistanceField)->Arg(128)->Arg(256);

void BM_ReducedStep(benchmark::State& state) {
  RclConfig rc;
  rc.eps = 0.1;
  rc.eta1 = 1.45;
  rc.eta2 = 2.0;
  rc.R0 = 1.0;
  rc.domain_half_width = 2 * kPi;
  rc.N1 = static_cast<int>(state.range(0));
  const ScalarConstants& c = family().consts;
  rc.M0 = c.m0 * 2 * kPi + (c.sigma1_star + 0.1) * c.b2_far * rc.domain_area();
  const ModeBasis basis = ModeBasis::make(rc.R0, rc.N1);
  RclState st;
  st.p = MeanderParams::zero(rc.N1);
  st.p.p_hat[0] = 1e-3;
  st.sigma = slaved_sigma(st.p, rc, c);
  for (auto _ : state) {
    st = step_curve(st, rc, c, basis);
    benchmark::DoNotOptimize(&st);
  }
}
BENCHMARK(BM_ReducedStep)->Arg(17)->Arg(33);

void BM_Extraction(benchmark::State& state) {
  const Grid2D g{128, kPi};
  const ModeBasis basis = ModeBasis::make(1.3, 13);
  const CurveSamples curve = build_curve(basis, MeanderParams::zero(13), 256);
  const Field2D u = synthesize_bilayer(g, curve, family(), -0.7, 0.2, 0.6);
  ExtractConfig ec;
  ec.n_rays = 512;
  ec.level = default_level(-1.0, family().base.turning_point);
  for (auto _ : state) {
    InterfaceLocate loc = locate_interface(u, ec);
    MeanderParams p = fit_modes(loc, basis, 1.3);
    benchmark::DoNotOptimize(&p);
  }
}
BENCHMARK(BM_Extraction);

}  // namespace

BENCHMARK_MAIN();
