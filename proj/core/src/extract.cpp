#include "fch/extract.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fch {
namespace {

constexpr double kPi = std::numbers::pi;

// Periodic bilinear interpolation.
double sample(const Field2D& u, double x, double y) {
  const Grid2D& g = u.grid;
  const double dx = g.dx();
  double fx = (x + g.half_width) / dx;
  double fy = (y + g.half_width) / dx;
  const int n = g.n;
  fx -= std::floor(fx / n) * n;
  fy -= std::floor(fy / n) * n;
  const int ix = static_cast<int>(fx) % n;
  const int iy = static_cast<int>(fy) % n;
  const double tx = fx - std::floor(fx);
  const double ty = fy - std::floor(fy);
  const int jx = (ix + 1) % n, jy = (iy + 1) % n;
  return (1 - tx) * (1 - ty) * u.at(iy, ix) + tx * (1 - ty) * u.at(iy, jx) +
         (1 - tx) * ty * u.at(jy, ix) + tx * ty * u.at(jy, jx);
}

}  // namespace

double default_level(double b_minus, double turning_point) {
  return b_minus + 0.5 * (turning_point - b_minus);
}

InterfaceLocate locate_interface(const Field2D& u, const ExtractConfig& cfg) {
  if (cfg.n_rays < 4) throw std::invalid_argument("locate_interface: n_rays < 4");
  const Grid2D& g = u.grid;
  const double level = cfg.level;

  // centroid of the super-level region, unwrapped around the seed
  double cx = 0.0, cy = 0.0;
  long count = 0;
  const double L = g.half_width;
  for (int iy = 0; iy < g.n; ++iy) {
    for (int ix = 0; ix < g.n; ++ix) {
      if (u.at(iy, ix) <= level) continue;
      double ox = g.x(ix) - cfg.center_seed.x;
      double oy = g.x(iy) - cfg.center_seed.y;
      ox -= std::round(ox / (2.0 * L)) * 2.0 * L;
      oy -= std::round(oy / (2.0 * L)) * 2.0 * L;
      cx += ox;
      cy += oy;
      ++count;
    }
  }
  InterfaceLocate out;
  if (count == 0)
    throw std::runtime_error("locate_interface: empty super-level region");
  out.center = {cfg.center_seed.x + cx / count, cfg.center_seed.y + cy / count};

  const double dr = 0.5 * g.dx();
  const double r_max = 0.98 * L;
  out.theta.resize(cfg.n_rays);
  out.radius.assign(cfg.n_rays, 0.0);
  out.valid.assign(cfg.n_rays, 0);
  double radius_acc = 0.0;
  int nvalid = 0;
  for (int i = 0; i < cfg.n_rays; ++i) {
    const double th = 2.0 * kPi * i / cfg.n_rays;
    out.theta[i] = th;
    const double ex = std::cos(th), ey = std::sin(th);
    std::vector<double> crossings;
    double prev = sample(u, out.center.x, out.center.y) - level;
    for (double r = dr; r <= r_max; r += dr) {
      const double cur =
          sample(u, out.center.x + r * ex, out.center.y + r * ey) - level;
      if (prev * cur < 0.0) {
        double lo = r - dr, hi = r;
        for (int b = 0; b < 50; ++b) {
          const double mid = 0.5 * (lo + hi);
          const double fm =
              sample(u, out.center.x + mid * ex, out.center.y + mid * ey) - level;
          if (fm * prev <= 0.0)
            hi = mid;
          else
            lo = mid;
        }
        crossings.push_back(0.5 * (lo + hi));
      }
      prev = cur;
    }
    if (crossings.size() == 2) {
      out.radius[i] = 0.5 * (crossings[0] + crossings[1]);
      out.valid[i] = 1;
      radius_acc += out.radius[i];
      ++nvalid;
    } else {
      ++out.skipped;
    }
  }
  if (out.skipped > cfg.max_skip_fraction * cfg.n_rays)
    throw std::runtime_error("locate_interface: " + std::to_string(out.skipped) +
                             " rays without exactly two crossings");
  out.mean_radius = radius_acc / std::max(1, nvalid);
  // fill skipped rays by the mean so downstream Fourier sums stay simple
  for (int i = 0; i < cfg.n_rays; ++i)
    if (!out.valid[i]) out.radius[i] = out.mean_radius;
  return out;
}

MeanderParams fit_modes(const InterfaceLocate& loc, const ModeBasis& basis,
                        double R0) {
  MeanderParams p = MeanderParams::zero(basis.N1);
  const int n = static_cast<int>(loc.radius.size());
  double mean = 0.0;
  for (double r : loc.radius) mean += r;
  mean /= n;
  p.p0 = mean / R0 - 1.0;
  const double theta0_inv = std::sqrt(2.0 * kPi * R0);
  p.p1 = loc.center.x * theta0_inv;
  p.p2 = loc.center.y * theta0_inv;
  const double one_p0 = 1.0 + p.p0;
  const double norm = std::sqrt(kPi * R0);
  const int kmax = (basis.N1 - 1) / 2;
  for (int k = 2; k <= kmax; ++k) {
    double a = 0.0, b = 0.0;
    for (int i = 0; i < n; ++i) {
      a += (loc.radius[i] - mean) * std::cos(k * loc.theta[i]);
      b += (loc.radius[i] - mean) * std::sin(k * loc.theta[i]);
    }
    a *= 2.0 / n;
    b *= 2.0 / n;
    const int j_cos = 2 * k - 1, j_sin = 2 * k;
    if (j_cos >= 3 && j_cos < basis.N1) p.p_hat[j_cos - 3] = a * norm / one_p0;
    if (j_sin >= 3 && j_sin < basis.N1) p.p_hat[j_sin - 3] = b * norm / one_p0;
  }
  return p;
}

}  // namespace fch
