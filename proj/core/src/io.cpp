#include "fch/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fch {

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path);
}

void save_field(const std::string& path_base, const Field2D& f, double eps,
                double time) {
  {
    std::ofstream bin(path_base + ".f64", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write " + path_base + ".f64");
    bin.write(reinterpret_cast<const char*>(f.v.data()),
              static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  }
  std::ofstream meta(path_base + ".meta");
  if (!meta) throw std::runtime_error("cannot write " + path_base + ".meta");
  meta.precision(17);
  meta << "n = " << f.grid.n << "\n"
       << "half_width = " << f.grid.half_width << "\n"
       << "eps = " << eps << "\n"
       << "time = " << time << "\n";
}

Field2D load_field(const std::string& path_base, double* eps, double* time) {
  std::ifstream meta(path_base + ".meta");
  if (!meta) throw std::runtime_error("cannot read " + path_base + ".meta");
  Grid2D g;
  std::string line;
  while (std::getline(meta, line)) {
    std::istringstream ss(line);
    std::string key, eq;
    double val;
    if (!(ss >> key >> eq >> val)) continue;
    if (key == "n")
      g.n = static_cast<int>(val);
    else if (key == "half_width")
      g.half_width = val;
    else if (key == "eps" && eps)
      *eps = val;
    else if (key == "time" && time)
      *time = val;
  }
  Field2D f(g);
  std::ifstream bin(path_base + ".f64", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot read " + path_base + ".f64");
  bin.read(reinterpret_cast<char*>(f.v.data()),
           static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!bin) throw std::runtime_error("truncated field file " + path_base);
  return f;
}

void save_profile(const std::string& path, std::span<const double> z,
                  std::span<const double> values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  const size_t n = std::min(z.size(), values.size());
  for (size_t i = 0; i < n; ++i) out << z[i] << " " << values[i] << "\n";
}

void save_curve(const std::string& path, const CurveSamples& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  for (int i = 0; i < c.M; ++i)
    out << c.s_tilde[i] << " " << c.x[i] << " " << c.y[i] << "\n";
  out << c.total_length << " " << c.x[0] << " " << c.y[0] << "\n";
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  f_ = f;
  cols_ = header.size();
  for (size_t i = 0; i < header.size(); ++i)
    std::fprintf(f, "%s%s", header[i].c_str(), i + 1 < header.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != cols_)
    throw std::invalid_argument("CsvWriter::row: column count mismatch");
  FILE* f = static_cast<FILE*>(f_);
  for (size_t i = 0; i < values.size(); ++i)
    std::fprintf(f, "%.12g%s", values[i], i + 1 < values.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(static_cast<FILE*>(f_));
}

}  // namespace fch
