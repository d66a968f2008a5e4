#pragma once

#include <string>
#include <vector>

#include "fch/curve.hpp"
#include "fch/spectral.hpp"

namespace fch {

// Flat binary field (row-major float64, little-endian) plus a text sidecar
// carrying N, L, eps and time.
void save_field(const std::string& path_base, const Field2D& f, double eps,
                double time);
Field2D load_field(const std::string& path_base, double* eps = nullptr,
                   double* time = nullptr);

// Two-column text (z, value).
void save_profile(const std::string& path, std::span<const double> z,
                  std::span<const double> values);

// Three-column text (s_tilde, x, y); the polyline is closed by repeating the
// first point.
void save_curve(const std::string& path, const CurveSamples& c);

// Minimal CSV writer with a mandatory header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  ~CsvWriter();

 private:
  void* f_ = nullptr;
  size_t cols_ = 0;
};

// PNG heatmap with a fixed colormap, range clamped to [lo, hi]
// (lo == hi: autoscale to the data range).
void save_png_heatmap(const std::string& path, const Field2D& f, double lo = 0.0,
                      double hi = 0.0);

void ensure_directory(const std::string& path);

}  // namespace fch
