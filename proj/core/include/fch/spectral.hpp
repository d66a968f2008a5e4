#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace fch {

// Square periodic cell Omega = [-L, L]^2, N samples per axis.
struct Grid2D {
  int n = 0;
  double half_width = 0.0;
  double dx() const { return 2.0 * half_width / n; }
  double area() const { return 4.0 * half_width * half_width; }
  double x(int i) const { return -half_width + dx() * i; }
  size_t size() const { return static_cast<size_t>(n) * n; }
};

// Real scalar field on the grid, row-major (iy slow, ix fast).
struct Field2D {
  Grid2D grid;
  std::vector<double> v;

  Field2D() = default;
  explicit Field2D(Grid2D g, double fill = 0.0) : grid(g), v(g.size(), fill) {}
  double& at(int iy, int ix) { return v[static_cast<size_t>(iy) * grid.n + ix]; }
  double at(int iy, int ix) const { return v[static_cast<size_t>(iy) * grid.n + ix]; }
  double mean() const;
};

// FFTW-backed spectral workspace for one grid; not thread-safe across calls,
// use one instance per thread.
class Spectral2D {
 public:
  explicit Spectral2D(Grid2D g);
  ~Spectral2D();
  Spectral2D(const Spectral2D&) = delete;
  Spectral2D& operator=(const Spectral2D&) = delete;

  const Grid2D& grid() const { return grid_; }

  void forward(const Field2D& f, std::vector<std::complex<double>>& out) const;
  Field2D backward(std::span<const std::complex<double>> in) const;

  Field2D laplacian(const Field2D& f) const;
  Field2D grad_x(const Field2D& f) const;
  Field2D grad_y(const Field2D& f) const;

  // |k|^2 per r2c entry, wavenumbers pi*m/L.
  const std::vector<double>& ksq() const { return ksq_; }
  size_t spectral_size() const { return ksq_.size(); }

  // 2/3-rule dealias mask (1 keep, 0 drop) per r2c entry.
  const std::vector<double>& dealias_mask() const { return mask_; }

 private:
  Grid2D grid_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  double* rbuf_ = nullptr;
  void* cbuf_ = nullptr;  // fftw_complex*
  std::vector<double> ksq_, kx_, ky_, mask_;
};

// Real periodic 1D transform helper for curve differentiation.
class Fft1D {
 public:
  explicit Fft1D(int m);
  ~Fft1D();
  Fft1D(const Fft1D&) = delete;
  Fft1D& operator=(const Fft1D&) = delete;

  // order-th spectral derivative of samples with the given period.
  void derivative(std::span<const double> in, std::span<double> out, int order,
                  double period) const;

  // zero-at-origin periodic antiderivative of (in - mean); the caller adds
  // the mean * s ramp.
  void antiderivative(std::span<const double> in, std::span<double> out,
                      double period) const;

 private:
  int m_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  double* rbuf_ = nullptr;
  void* cbuf_ = nullptr;
};

// Per-thread cache keyed by transform length.
Fft1D& fft1d_cache(int m);

}  // namespace fch
