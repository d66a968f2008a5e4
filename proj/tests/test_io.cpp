#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "fch/io.hpp"

using namespace fch;

namespace {
std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("field binary round trip is bit exact") {
  const Grid2D g{32, 1.5};
  Field2D f(g);
  for (size_t i = 0; i < f.v.size(); ++i)
    f.v[i] = std::sin(0.01 * static_cast<double>(i)) * 1e-3 + 0.1;
  const std::string base = tmp_path("fch_field_test");
  save_field(base, f, 0.2, 12.5);
  double eps = 0.0, t = 0.0;
  const Field2D g2 = load_field(base, &eps, &t);
  CHECK(eps == 0.2);
  CHECK(t == 12.5);
  CHECK(g2.grid.n == 32);
  CHECK(g2.grid.half_width == 1.5);
  for (size_t i = 0; i < f.v.size(); ++i) CHECK(g2.v[i] == f.v[i]);
}

TEST_CASE("csv writer emits a header row") {
  const std::string path = tmp_path("fch_csv_test.csv");
  {
    CsvWriter csv(path, {"time", "mass", "energy"});
    csv.row({0.0, 1.0, 2.0});
    csv.row({0.1, 1.0, 1.9});
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "time,mass,energy");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("png export writes a valid signature") {
  const Grid2D g{32, 1.0};
  Field2D f(g);
  for (int iy = 0; iy < 32; ++iy)
    for (int ix = 0; ix < 32; ++ix) f.at(iy, ix) = ix + iy;
  const std::string path = tmp_path("fch_png_test.png");
  save_png_heatmap(path, f);
  std::ifstream in(path, std::ios::binary);
  unsigned char sig[8];
  in.read(reinterpret_cast<char*>(sig), 8);
  CHECK(sig[0] == 0x89);
  CHECK(sig[1] == 'P');
  CHECK(sig[2] == 'N');
  CHECK(sig[3] == 'G');
  CHECK(std::filesystem::file_size(path) > 100);
}

TEST_CASE("profile and curve text exports") {
  const std::string p1 = tmp_path("fch_profile_test.dat");
  std::vector<double> z = {-1, 0, 1}, v = {0.1, 0.5, 0.1};
  save_profile(p1, z, v);
  std::ifstream in(p1);
  double a, b;
  in >> a >> b;
  CHECK(a == -1.0);
  CHECK(b == 0.1);
}
