#include "fch/well.hpp"

#include <cmath>
#include <stdexcept>

#include "fch/numerics.hpp"

namespace fch {
namespace {

// Coefficient array c[k] for sum c[k] u^k.
std::vector<double> default_coefficients(const WellSpec& s) {
  // P(u) = (u - b-)^2, Q(u) = (u - b+)^2/2 + tau (u - b+ - (b+ - b-)/2);
  // the tilt offset keeps W'(b+) = 0 for any (b-, b+).
  const double bm = s.b_minus, bp = s.b_plus;
  const std::vector<double> P = {bm * bm, -2.0 * bm, 1.0};
  const std::vector<double> Q = {0.5 * bp * bp + s.tau * (-bp - 0.5 * (bp - bm)),
                                 -bp + s.tau, 0.5};
  std::vector<double> W(P.size() + Q.size() - 1, 0.0);
  for (size_t i = 0; i < P.size(); ++i)
    for (size_t j = 0; j < Q.size(); ++j) W[i + j] += P[i] * Q[j];
  return W;
}

double eval_poly_derivative(const std::vector<double>& c, double u, int order) {
  // Differentiate coefficients `order` times, then Horner.
  double val = 0.0;
  for (size_t k = c.size(); k-- > 0;) {
    if (static_cast<int>(k) < order) break;
    double fac = 1.0;
    for (int j = 0; j < order; ++j) fac *= static_cast<double>(k - j);
    val = val * u + fac * c[k];
  }
  return val;
}

}  // namespace

WellSpec WellSpec::default_tilted(double tau, double b_minus, double b_plus) {
  WellSpec s;
  s.b_minus = b_minus;
  s.b_plus = b_plus;
  s.tau = tau;
  s.form = WellForm::DefaultTilted;
  return s;
}

double eval_well(const WellSpec& spec, double u, int order) {
  if (order < 0 || order > 3)
    throw std::invalid_argument("eval_well: order must be in 0..3");
  const std::vector<double> c = well_coefficients(spec);
  return eval_poly_derivative(c, u, order);
}

std::vector<double> well_coefficients(const WellSpec& spec) {
  const std::vector<double> c = (spec.form == WellForm::DefaultTilted)
                                    ? default_coefficients(spec)
                                    : spec.coefficients;
  if (c.empty()) throw std::invalid_argument("well_coefficients: empty polynomial");
  return c;
}

WellReport validate_well(const WellSpec& spec) {
  WellReport r;
  const double bm = spec.b_minus, bp = spec.b_plus;
  auto W = [&](double u) { return eval_well(spec, u, 0); };
  auto fail = [&](const std::string& what) {
    r.ok = false;
    r.violation = what;
    return r;
  };

  for (double c : (spec.form == WellForm::Polynomial ? spec.coefficients
                                                     : std::vector<double>{bm, bp, spec.tau}))
    if (!std::isfinite(c)) return fail("non-finite coefficient");
  if (!(bm < bp)) return fail("b_minus < b_plus violated");

  r.w2_at_bminus = eval_well(spec, bm, 2);
  r.w_at_bplus = W(bp);
  const double scale = std::max(1.0, std::abs(r.w_at_bplus));
  if (std::abs(W(bm)) > 1e-10 * scale) return fail("W(b_minus) = 0 violated");
  if (std::abs(eval_well(spec, bm, 1)) > 1e-10 * scale)
    return fail("W'(b_minus) = 0 violated");
  if (!(r.w2_at_bminus > 0.0)) return fail("W''(b_minus) > 0 violated");
  if (std::abs(eval_well(spec, bp, 1)) > 1e-10 * scale)
    return fail("W'(b_plus) = 0 violated");
  if (!(r.w_at_bplus < 0.0)) return fail("W(b_plus) < 0 violated");

  // Unique turning point u* in (b-, b+): scan for the sign change of W away
  // from the double root at b-, then bisect.
  const int scan = 4096;
  double a = bm, fa = 0.0;
  bool bracketed = false;
  double width = bp - bm;
  for (int i = 1; i <= scan; ++i) {
    const double u = bm + width * static_cast<double>(i) / scan;
    const double fu = W(u);
    if (i == 1 && fu <= 0.0) return fail("W > 0 just right of b_minus violated");
    if (fa > 0.0 && fu <= 0.0) {
      r.turning_point = bisection([&](double v) { return W(v); }, a, u, 1e-15);
      bracketed = true;
      break;
    }
    a = u;
    fa = fu;
  }
  if (!bracketed) return fail("no turning point u* in (b_minus, b_plus)");

  // W > 0 on (b-, u*).
  for (int i = 1; i < 512; ++i) {
    const double u = bm + (r.turning_point - bm) * static_cast<double>(i) / 512;
    if (W(u) <= 0.0) return fail("W > 0 on (b_minus, u*) violated");
  }
  r.ok = true;
  return r;
}

}  // namespace fch
