#include "fch/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fch {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), ::tolower);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("config: bad boolean '" + v + "'");
}

}  // namespace

RunConfig parse_config_file(const std::string& path, RunConfig cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto num = [&] {
      try {
        return std::stod(val);
      } catch (...) {
        throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                    ": bad number for " + key);
      }
    };
    const std::string sk = section + "." + key;
    if (sk == "well.b_minus")
      cfg.well.b_minus = num();
    else if (sk == "well.b_plus")
      cfg.well.b_plus = num();
    else if (sk == "well.tau")
      cfg.well.tau = num();
    else if (sk == "well.coefficients") {
      cfg.well.form = WellForm::Polynomial;
      cfg.well.coefficients.clear();
      std::istringstream ss(val);
      double c;
      while (ss >> c) cfg.well.coefficients.push_back(c);
    } else if (sk == "grid.n")
      cfg.grid_n = static_cast<int>(num());
    else if (sk == "grid.half_width")
      cfg.grid_half_width = num();
    else if (sk == "physics.eps")
      cfg.eps = num();
    else if (sk == "physics.eta1")
      cfg.eta1 = num();
    else if (sk == "physics.eta2")
      cfg.eta2 = num();
    else if (sk == "physics.alpha")
      cfg.alpha = num();
    else if (sk == "physics.s1")
      cfg.s1 = num();
    else if (sk == "mass.m0_total")
      cfg.m0_total = num();
    else if (sk == "mass.sigma0")
      cfg.sigma0 = num();
    else if (sk == "mass.sigma_factor")
      cfg.sigma_factor = num();
    else if (sk == "curve.r0")
      cfg.r0 = num();
    else if (sk == "curve.n1")
      cfg.n1 = static_cast<int>(num());
    else if (sk == "curve.m")
      cfg.curve_m = static_cast<int>(num());
    else if (sk == "curve.delta")
      cfg.delta = num();
    else if (sk == "curve.perturbation")
      cfg.perturbation = num();
    else if (sk == "solver.scheme") {
      if (val == "semi_implicit")
        cfg.scheme = Scheme::SemiImplicitSplitting;
      else if (val == "rk4")
        cfg.scheme = Scheme::Rk4Explicit;
      else
        throw std::invalid_argument("config: unknown scheme '" + val + "'");
    } else if (sk == "solver.dt")
      cfg.dt = num();
    else if (sk == "solver.t_end")
      cfg.t_end = num();
    else if (sk == "solver.snapshot_every")
      cfg.snapshot_every = static_cast<int>(num());
    else if (sk == "solver.stabilization_c")
      cfg.stabilization_c = num();
    else if (sk == "solver.dealias")
      cfg.dealias = parse_bool(val);
    else if (sk == "reduced.dt")
      cfg.reduced_dt = num();
    else if (sk == "reduced.t_end")
      cfg.reduced_t_end = num();
    else if (sk == "experiment.name")
      cfg.preset = val;
    else if (sk == "experiment.seed")
      cfg.seed = static_cast<unsigned long>(num());
    else if (sk == "experiment.with_pde")
      cfg.with_pde = parse_bool(val);
    else if (sk == "output.dir")
      cfg.out_dir = val;
    else
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  ": unknown key " + sk);
  }
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("config: " + what);
  };
  const WellReport wr = validate_well(cfg.well);
  if (!wr.ok) fail("well: " + wr.violation);
  if (cfg.grid_n < 16 || (cfg.grid_n & (cfg.grid_n - 1)) != 0)
    fail("grid.n must be a power of two >= 16");
  if (cfg.grid_half_width <= 0.0) fail("grid.half_width must be positive");
  if (cfg.eps <= 0.0 || cfg.eps > 0.5) fail("physics.eps must be in (0, 0.5]");
  if (cfg.r0 <= 0.0) fail("curve.r0 must be positive");
  if (cfg.n1 < 4) fail("curve.n1 must be >= 4");
  if (cfg.dt <= 0.0) fail("solver.dt must be positive");
  if (cfg.t_end < 0.0) fail("solver.t_end must be nonnegative");
  if (cfg.snapshot_every < 1) fail("solver.snapshot_every must be >= 1");
  // the dressing tube must fit inside the domain
  const double ell_room = cfg.grid_half_width - cfg.r0 - 4.0 * cfg.grid_half_width * 2.0 / cfg.grid_n;
  if (ell_room <= 0.0)
    fail("tube exceeds the domain: r0 + margin >= grid.half_width");
  int mass_sources = 0;
  mass_sources += cfg.m0_total.has_value();
  mass_sources += cfg.sigma0.has_value();
  mass_sources += cfg.sigma_factor.has_value();
  if (mass_sources > 1)
    fail("mass: give only one of m0_total, sigma0, sigma_factor");
}

}  // namespace fch
