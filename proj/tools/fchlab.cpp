// Command-line front end: one subcommand per experiment preset.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>

#include "fch/config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  bool strict = false;
};

void add_common(CLI::App* sub, CommonArgs* args) {
  sub->add_option("--config", args->config_path, "run configuration file")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", args->out_dir, "output directory");
  sub->add_flag("--strict", args->strict,
                "nonzero exit when a flagged diagnostic fails");
}

int run_preset(const std::string& name, const CommonArgs& args,
               const std::function<void(fch::RunConfig&)>& tweak = {}) {
  fch::RunConfig cfg;
  cfg.preset = name;
  if (!args.config_path.empty())
    cfg = fch::parse_config_file(args.config_path, cfg);
  cfg.preset = name;  // subcommand wins over the file
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (const char* env = std::getenv("FCHLAB_OUT_DIR"))
    cfg.out_dir = env;  // env override, output directory only
  cfg.strict = args.strict;
  if (tweak) tweak(cfg);
  return fch::run_experiment(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fchlab: functionalized Cahn-Hilliard gradient-flow laboratory"};
  app.require_subcommand(1);

  CommonArgs a_fig, a_eq, a_decay, a_const, a_res;
  double sigma_factor = 0.0;
  bool with_pde = false;

  CLI::App* fig = app.add_subcommand(
      "figure1", "full PDE run with extraction and reduced comparison");
  add_common(fig, &a_fig);
  fig->add_option("--sigma-factor", sigma_factor,
                  "initial sigma as a multiple of sigma1*");

  CLI::App* eq = app.add_subcommand(
      "equilibrium", "equilibrium-radius convergence study over eps");
  add_common(eq, &a_eq);

  CLI::App* decay =
      app.add_subcommand("decay-rates", "mode-k decay-rate fits");
  add_common(decay, &a_decay);
  decay->add_flag("--with-pde", with_pde, "also fit one PDE-level mode decay");

  CLI::App* consts =
      app.add_subcommand("constants", "tabulate the scalar constants");
  add_common(consts, &a_const);

  CLI::App* res = app.add_subcommand(
      "residual", "|Pi0 F(Phi_p)| vs eps slopes with and without phi1");
  add_common(res, &a_res);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fig->parsed())
      return run_preset("figure1", a_fig, [&](fch::RunConfig& c) {
        if (sigma_factor != 0.0) c.sigma_factor = sigma_factor;
      });
    if (eq->parsed()) return run_preset("equilibrium", a_eq);
    if (decay->parsed())
      return run_preset("decay-rates", a_decay,
                        [&](fch::RunConfig& c) { c.with_pde = with_pde; });
    if (consts->parsed()) return run_preset("constants", a_const);
    if (res->parsed()) return run_preset("residual", a_res);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
