#pragma once

#include <string>
#include <vector>

namespace fch {

enum class WellForm { DefaultTilted, Polynomial };

// Tilted double well W with minima at b_minus (solvent, W = 0) and b_plus
// (packed, W < 0). The default form is
//   W(u) = (u - b_minus)^2 [ (u - b_plus)^2 / 2 + tau (u - b_plus - (b_plus - b_minus)) ].
struct WellSpec {
  double b_minus = -1.0;
  double b_plus = 1.0;
  double tau = 0.1;
  WellForm form = WellForm::DefaultTilted;
  std::vector<double> coefficients;  // Polynomial form: c0 + c1 u + c2 u^2 + ...

  static WellSpec default_tilted(double tau = 0.1, double b_minus = -1.0,
                                 double b_plus = 1.0);
};

// W and derivatives up to order 3, exact polynomial arithmetic.
double eval_well(const WellSpec& spec, double u, int order);

// Coefficient array of W as a polynomial in u (c0 + c1 u + ...).
std::vector<double> well_coefficients(const WellSpec& spec);

struct WellReport {
  bool ok = false;
  double w2_at_bminus = 0.0;
  double w_at_bplus = 0.0;
  double turning_point = 0.0;
  std::string violation;  // empty when ok
};

// Numerical verification of the structural assumptions on W. Never throws on
// a structurally bad well; reports the first violated condition instead.
WellReport validate_well(const WellSpec& spec);

}  // namespace fch
