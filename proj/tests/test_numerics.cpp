#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fch/numerics.hpp"

using namespace fch;

TEST_CASE("trapezoid and simpson on smooth integrands") {
  const int n = 401;
  const double a = 0.0, b = std::numbers::pi;
  const double h = (b - a) / (n - 1);
  std::vector<double> f(n);
  for (int i = 0; i < n; ++i) f[i] = std::sin(a + h * i);
  CHECK(trapezoid(f, h) == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(simpson(f, h) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("tridiagonal solve with pivoting matches a dense reference") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int n = 40;
  std::vector<double> sub(n - 1), diag(n), super(n - 1), x_true(n), rhs(n, 0.0);
  for (int i = 0; i < n; ++i) {
    diag[i] = unif(rng);  // indefinite on purpose
    x_true[i] = unif(rng);
  }
  for (int i = 0; i < n - 1; ++i) {
    sub[i] = unif(rng);
    super[i] = unif(rng);
  }
  for (int i = 0; i < n; ++i) {
    rhs[i] = diag[i] * x_true[i];
    if (i > 0) rhs[i] += sub[i - 1] * x_true[i - 1];
    if (i + 1 < n) rhs[i] += super[i] * x_true[i + 1];
  }
  const std::vector<double> x = solve_tridiag(sub, diag, super, rhs);
  for (int i = 0; i < n; ++i)
    CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-9));
}

TEST_CASE("cubic Hermite with exact slopes reproduces smooth functions") {
  const int n = 200;
  std::vector<double> x(n), y(n), d(n);
  for (int i = 0; i < n; ++i) {
    x[i] = -3.0 + 6.0 * i / (n - 1);
    y[i] = std::tanh(x[i]);
    d[i] = 1.0 - y[i] * y[i];
  }
  CubicHermite interp(x, y, d);
  double err = 0.0;
  for (int i = 0; i < 997; ++i) {
    const double xi = -3.0 + 6.0 * i / 996.0;
    err = std::max(err, std::abs(interp(xi) - std::tanh(xi)));
  }
  CHECK(err < 1e-7);
}

TEST_CASE("pchip is monotone on monotone data") {
  std::vector<double> x = {0, 1, 2, 3, 4, 5};
  std::vector<double> y = {0, 0.1, 0.2, 2.0, 2.05, 2.1};
  const CubicHermite interp = CubicHermite::pchip(x, y);
  double prev = interp(0.0);
  for (int i = 1; i <= 500; ++i) {
    const double cur = interp(5.0 * i / 500.0);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
}

TEST_CASE("line fit recovers slope and intercept") {
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(0.1 * i);
    y.push_back(3.5 - 2.0 * 0.1 * i);
  }
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(3.5).epsilon(1e-12));
}
