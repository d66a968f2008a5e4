#include "fch/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fch {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double Field2D::mean() const {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Spectral2D::Spectral2D(Grid2D g) : grid_(g) {
  if (g.n < 4 || g.n % 2 != 0)
    throw std::invalid_argument("Spectral2D: n must be even and >= 4");
  const int n = g.n;
  const int nc = n * (n / 2 + 1);
  rbuf_ = fftw_alloc_real(static_cast<size_t>(n) * n);
  fftw_complex* cb = fftw_alloc_complex(nc);
  cbuf_ = cb;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, rbuf_, cb, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_2d(n, n, cb, rbuf_, FFTW_ESTIMATE);
  }
  const double k0 = std::numbers::pi / g.half_width;
  kx_.resize(nc);
  ky_.resize(nc);
  ksq_.resize(nc);
  mask_.resize(nc);
  const int cut = n / 3;
  for (int iy = 0; iy < n; ++iy) {
    const int my = (iy <= n / 2) ? iy : iy - n;
    for (int ix = 0; ix <= n / 2; ++ix) {
      const int idx = iy * (n / 2 + 1) + ix;
      const double kx = k0 * ix;
      const double ky = k0 * my;
      kx_[idx] = (ix == n / 2) ? 0.0 : kx;  // zero odd-order Nyquist
      ky_[idx] = (std::abs(my) == n / 2) ? 0.0 : ky;
      ksq_[idx] = kx * kx + ky * ky;
      mask_[idx] = (std::abs(my) <= cut && ix <= cut) ? 1.0 : 0.0;
    }
  }
}

Spectral2D::~Spectral2D() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(rbuf_);
  fftw_free(static_cast<fftw_complex*>(cbuf_));
}

void Spectral2D::forward(const Field2D& f,
                         std::vector<std::complex<double>>& out) const {
  const int n = grid_.n;
  const int nc = n * (n / 2 + 1);
  std::memcpy(rbuf_, f.v.data(), sizeof(double) * f.v.size());
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  out.resize(nc);
  const fftw_complex* cb = static_cast<const fftw_complex*>(cbuf_);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (int i = 0; i < nc; ++i)
    out[i] = std::complex<double>(cb[i][0] * scale, cb[i][1] * scale);
}

Field2D Spectral2D::backward(std::span<const std::complex<double>> in) const {
  const int n = grid_.n;
  const int nc = n * (n / 2 + 1);
  if (static_cast<int>(in.size()) != nc)
    throw std::invalid_argument("Spectral2D::backward: size mismatch");
  fftw_complex* cb = static_cast<fftw_complex*>(cbuf_);
  for (int i = 0; i < nc; ++i) {
    cb[i][0] = in[i].real();
    cb[i][1] = in[i].imag();
  }
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  Field2D out(grid_);
  std::memcpy(out.v.data(), rbuf_, sizeof(double) * out.v.size());
  return out;
}

Field2D Spectral2D::laplacian(const Field2D& f) const {
  std::vector<std::complex<double>> c;
  forward(f, c);
  for (size_t i = 0; i < c.size(); ++i) c[i] *= -ksq_[i];
  return backward(c);
}

Field2D Spectral2D::grad_x(const Field2D& f) const {
  std::vector<std::complex<double>> c;
  forward(f, c);
  const std::complex<double> I(0.0, 1.0);
  for (size_t i = 0; i < c.size(); ++i) c[i] *= I * kx_[i];
  return backward(c);
}

Field2D Spectral2D::grad_y(const Field2D& f) const {
  std::vector<std::complex<double>> c;
  forward(f, c);
  const std::complex<double> I(0.0, 1.0);
  for (size_t i = 0; i < c.size(); ++i) c[i] *= I * ky_[i];
  return backward(c);
}

Fft1D::Fft1D(int m) : m_(m) {
  if (m < 4) throw std::invalid_argument("Fft1D: m must be >= 4");
  rbuf_ = fftw_alloc_real(m);
  fftw_complex* cb = fftw_alloc_complex(m / 2 + 1);
  cbuf_ = cb;
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_r2c_1d(m, rbuf_, cb, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_c2r_1d(m, cb, rbuf_, FFTW_ESTIMATE);
}

Fft1D::~Fft1D() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(rbuf_);
  fftw_free(static_cast<fftw_complex*>(cbuf_));
}

void Fft1D::derivative(std::span<const double> in, std::span<double> out,
                       int order, double period) const {
  if (static_cast<int>(in.size()) != m_ || static_cast<int>(out.size()) != m_)
    throw std::invalid_argument("Fft1D::derivative: size mismatch");
  std::memcpy(rbuf_, in.data(), sizeof(double) * m_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  fftw_complex* cb = static_cast<fftw_complex*>(cbuf_);
  const double k0 = 2.0 * std::numbers::pi / period;
  const int half = m_ / 2;
  for (int k = 0; k <= half; ++k) {
    double kk = k0 * k;
    if (k == half && m_ % 2 == 0 && order % 2 == 1) kk = 0.0;
    std::complex<double> mult(1.0, 0.0);
    const std::complex<double> ik(0.0, kk);
    for (int o = 0; o < order; ++o) mult *= ik;
    const std::complex<double> val(cb[k][0], cb[k][1]);
    const std::complex<double> res = val * mult;
    cb[k][0] = res.real();
    cb[k][1] = res.imag();
  }
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  const double scale = 1.0 / m_;
  for (int i = 0; i < m_; ++i) out[i] = rbuf_[i] * scale;
}

void Fft1D::antiderivative(std::span<const double> in, std::span<double> out,
                           double period) const {
  if (static_cast<int>(in.size()) != m_ || static_cast<int>(out.size()) != m_)
    throw std::invalid_argument("Fft1D::antiderivative: size mismatch");
  std::memcpy(rbuf_, in.data(), sizeof(double) * m_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  fftw_complex* cb = static_cast<fftw_complex*>(cbuf_);
  const double k0 = 2.0 * std::numbers::pi / period;
  const int half = m_ / 2;
  cb[0][0] = 0.0;
  cb[0][1] = 0.0;
  for (int k = 1; k <= half; ++k) {
    if (k == half && m_ % 2 == 0) {
      cb[k][0] = 0.0;
      cb[k][1] = 0.0;
      continue;
    }
    const std::complex<double> val(cb[k][0], cb[k][1]);
    const std::complex<double> res = val / std::complex<double>(0.0, k0 * k);
    cb[k][0] = res.real();
    cb[k][1] = res.imag();
  }
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  const double scale = 1.0 / m_;
  const double offset = rbuf_[0] * scale;
  for (int i = 0; i < m_; ++i) out[i] = rbuf_[i] * scale - offset;
}

Fft1D& fft1d_cache(int m) {
  thread_local std::map<int, std::unique_ptr<Fft1D>> cache;
  auto it = cache.find(m);
  if (it == cache.end())
    it = cache.emplace(m, std::make_unique<Fft1D>(m)).first;
  return *it->second;
}

}  // namespace fch
