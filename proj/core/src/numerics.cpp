#include "fch/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fch {

double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

double simpson(std::span<const double> f, double h) {
  const size_t n = f.size();
  if (n < 3) return trapezoid(f, h);
  size_t m = n;
  double tail = 0.0;
  if ((n - 1) % 2 != 0) {  // odd interval count: trapezoid on the last one
    tail = 0.5 * h * (f[n - 2] + f[n - 1]);
    m = n - 1;
  }
  double s = f[0] + f[m - 1];
  for (size_t i = 1; i + 1 < m; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0 + tail;
}

double bisection(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::invalid_argument("bisection: no sign change");
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    const double c = 0.5 * (a + b);
    const double fc = f(c);
    if (fc == 0.0) return c;
    if (fa * fc < 0.0) {
      b = c;
      fb = fc;
    } else {
      a = c;
      fa = fc;
    }
  }
  return 0.5 * (a + b);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const size_t n = std::min(x.size(), y.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  LineFit out;
  out.slope = (dn * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / dn;
  return out;
}

std::vector<double> solve_tridiag(std::span<const double> sub,
                                  std::span<const double> diag,
                                  std::span<const double> super,
                                  std::span<const double> rhs) {
  const size_t n = diag.size();
  if (sub.size() + 1 != n || super.size() + 1 != n || rhs.size() != n)
    throw std::invalid_argument("solve_tridiag: size mismatch");
  // Banded Gaussian elimination with partial pivoting; fill-in adds a second
  // superdiagonal.
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> u1(n, 0.0), u2(n, 0.0), b(rhs.begin(), rhs.end());
  std::vector<double> l(sub.begin(), sub.end());
  for (size_t i = 0; i + 1 < n; ++i) u1[i] = super[i];

  for (size_t i = 0; i + 1 < n; ++i) {
    double piv = d[i], low = l[i];
    if (std::abs(low) > std::abs(piv)) {
      // swap row i and i+1
      std::swap(d[i], l[i]);           // note: l[i] is row i+1 col i
      const double t1 = u1[i];
      u1[i] = d[i + 1];
      d[i + 1] = t1;
      const double t2 = u2[i];
      u2[i] = (i + 2 < n) ? u1[i + 1] : 0.0;
      if (i + 2 < n) u1[i + 1] = t2;
      std::swap(b[i], b[i + 1]);
      piv = d[i];
    }
    if (piv == 0.0) throw std::runtime_error("solve_tridiag: singular matrix");
    const double m = l[i] / piv;
    l[i] = 0.0;
    d[i + 1] -= m * u1[i];
    if (i + 2 < n) u1[i + 1] -= m * u2[i];
    b[i + 1] -= m * b[i];
  }
  if (d[n - 1] == 0.0) throw std::runtime_error("solve_tridiag: singular matrix");

  std::vector<double> x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  if (n >= 2) x[n - 2] = (b[n - 2] - u1[n - 2] * x[n - 1]) / d[n - 2];
  for (size_t k = n; k >= 3; --k) {
    const size_t i = k - 3;
    x[i] = (b[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / d[i];
  }
  return x;
}

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y,
                           std::vector<double> d)
    : x_(std::move(x)), y_(std::move(y)), d_(std::move(d)) {
  if (x_.size() != y_.size() || x_.size() != d_.size() || x_.size() < 2)
    throw std::invalid_argument("CubicHermite: bad knot arrays");
}

CubicHermite CubicHermite::pchip(std::vector<double> x, std::vector<double> y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("pchip: bad input");
  std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  return CubicHermite(std::move(x), std::move(y), std::move(d));
}

double CubicHermite::operator()(double xi) const {
  if (xi <= x_.front()) return y_.front();
  if (xi >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), xi);
  const size_t i = static_cast<size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (xi - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

UniformInterp::UniformInterp(double x0, double h, std::vector<double> y)
    : x0_(x0), h_(h), y_(std::move(y)) {
  const size_t n = y_.size();
  if (n < 5) throw std::invalid_argument("UniformInterp: need >= 5 samples");
  d_.resize(n);
  for (size_t i = 2; i + 2 < n; ++i)
    d_[i] = (-y_[i + 2] + 8 * y_[i + 1] - 8 * y_[i - 1] + y_[i - 2]) / (12 * h_);
  d_[0] = (y_[1] - y_[0]) / h_;
  d_[1] = (y_[2] - y_[0]) / (2 * h_);
  d_[n - 2] = (y_[n - 1] - y_[n - 3]) / (2 * h_);
  d_[n - 1] = (y_[n - 1] - y_[n - 2]) / h_;
}

double UniformInterp::operator()(double xi) const {
  const size_t n = y_.size();
  const double pos = (xi - x0_) / h_;
  if (pos <= 0.0) return y_.front();
  if (pos >= static_cast<double>(n - 1)) return y_.back();
  const size_t i = static_cast<size_t>(pos);
  const double t = pos - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h10 * h_ * d_[i] + h01 * y_[i + 1] + h11 * h_ * d_[i + 1];
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace fch
