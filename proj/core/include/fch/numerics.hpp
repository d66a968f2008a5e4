#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fch {

// Composite trapezoid on a uniform grid with spacing h.
double trapezoid(std::span<const double> f, double h);

// Composite Simpson; falls back to trapezoid on the last interval when the
// number of intervals is odd.
double simpson(std::span<const double> f, double h);

double bisection(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-14, int max_iter = 200);

// Least-squares line fit y = slope*x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Symmetric-looking tridiagonal solve with partial pivoting; works for
// indefinite systems. sub/super have size n-1, diag and rhs size n.
std::vector<double> solve_tridiag(std::span<const double> sub,
                                  std::span<const double> diag,
                                  std::span<const double> super,
                                  std::span<const double> rhs);

// Piecewise cubic Hermite on sorted knots; evaluation clamps to the ends.
class CubicHermite {
 public:
  CubicHermite(std::vector<double> x, std::vector<double> y,
               std::vector<double> d);
  // Fritsch-Carlson monotone slopes.
  static CubicHermite pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double xi) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, d_;
};

// Interpolant for a profile sampled on a uniform grid; slopes from 4th-order
// central differences, constant extension beyond the grid.
class UniformInterp {
 public:
  UniformInterp() = default;
  UniformInterp(double x0, double h, std::vector<double> y);
  double operator()(double xi) const;
  bool empty() const { return y_.empty(); }

 private:
  double x0_ = 0.0, h_ = 1.0;
  std::vector<double> y_, d_;
};

// Small dense row-major matrix.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;
  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs(std::span<const double> a);

}  // namespace fch
