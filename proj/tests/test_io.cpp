#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "pabeam/io.hpp"

using namespace pabeam;
namespace fs = std::filesystem;

namespace {

fs::path tmpdir() {
  fs::path p = fs::temp_directory_path() / "pabeam_io_tests";
  fs::create_directories(p);
  return p;
}

RfFrame random_frame(int m, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<double> data(std::size_t(m) * n);
  for (double& v : data) v = double(u(rng));  // exactly float32-representable
  return RfFrame(m, n, 41.7e6, 1.25e-6, data);
}

}  // namespace

TEST_CASE("rf round-trip is lossless at float32 precision") {
  fs::path path = tmpdir() / "frame.parf";
  RfFrame f = random_frame(5, 37, 11);
  write_rf(f, path);
  RfFrame g = read_rf(path);
  CHECK(g.num_elements() == 5);
  CHECK(g.num_samples() == 37);
  CHECK(g.sample_rate() == f.sample_rate());
  CHECK(g.start_time() == f.start_time());
  CHECK(g.data() == f.data());
}

TEST_CASE("rf file size is 32 + 4*M*N bytes") {
  fs::path path = tmpdir() / "size.parf";
  RfFrame f = random_frame(3, 29, 2);
  write_rf(f, path);
  CHECK(fs::file_size(path) == 32u + 4u * 3u * 29u);
}

TEST_CASE("rf reader rejects corrupted magic") {
  fs::path path = tmpdir() / "magic.parf";
  write_rf(random_frame(2, 8, 3), path);
  std::fstream fsx(path, std::ios::in | std::ios::out | std::ios::binary);
  fsx.seekp(0);
  fsx.write("JUNK", 4);
  fsx.close();
  try {
    read_rf(path);
    FAIL("expected rf_bad_magic");
  } catch (const Error& e) {
    CHECK(e.kind() == "rf_bad_magic");
  }
}

TEST_CASE("rf reader rejects truncated payload") {
  fs::path path = tmpdir() / "trunc.parf";
  write_rf(random_frame(2, 8, 4), path);
  fs::resize_file(path, fs::file_size(path) - 5);
  try {
    read_rf(path);
    FAIL("expected rf_truncated");
  } catch (const Error& e) {
    CHECK(e.kind() == "rf_truncated");
  }
}

TEST_CASE("pgm endpoint and midpoint mapping") {
  fs::path path = tmpdir() / "img.pgm";
  Image2D db(3, 1);
  db.values = {0.0, -60.0, -30.0};
  write_pgm(db, 60.0, path);
  std::ifstream is(path, std::ios::binary);
  std::string magic, dims;
  std::getline(is, magic);
  CHECK(magic == "P5");
  int w, h, maxval;
  is >> w >> h >> maxval;
  CHECK(w == 3);
  CHECK(h == 1);
  CHECK(maxval == 255);
  is.get();  // single whitespace after maxval
  unsigned char px[3];
  is.read(reinterpret_cast<char*>(px), 3);
  CHECK(px[0] == 255);
  CHECK(px[1] == 0);
  CHECK(px[2] == 128);  // round-half-up of 127.5
}

TEST_CASE("tabular image round-trips to full precision") {
  fs::path path = tmpdir() / "img.tab";
  ImagingGrid grid(-1e-3, 1e-3, 2e-3, 3e-3, 0.5e-3, 0.5e-3);
  Image2D img(grid.n_lateral(), grid.n_axial());
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-80.0, 0.0);
  for (double& v : img.values) v = u(rng);
  write_tabular(img, grid, "db", path);
  TabularImage back = read_tabular(path);
  REQUIRE(back.image.n_lateral == grid.n_lateral());
  REQUIRE(back.image.n_axial == grid.n_axial());
  for (std::size_t i = 0; i < img.values.size(); ++i)
    CHECK(back.image.values[i] == img.values[i]);
  CHECK(back.lateral_min_mm == doctest::Approx(-1.0));
  CHECK(back.axial_step_mm == doctest::Approx(0.5));
}

TEST_CASE("profile writer emits mm/dB rows") {
  fs::path path = tmpdir() / "p.tab";
  LateralProfile p;
  p.depth = 40e-3;
  p.lateral = {-1e-3, 0.0, 1e-3};
  p.value = {-10.0, 0.0, -12.5};
  write_profile(p, path);
  std::ifstream is(path);
  std::string line;
  std::getline(is, line);
  CHECK(line.find("40") != std::string::npos);
  std::getline(is, line);  // column header
  double lat, val;
  is >> lat >> val;
  CHECK(lat == doctest::Approx(-1.0));
  CHECK(val == doctest::Approx(-10.0));
}

TEST_CASE("fnv1a fingerprint is stable and content-sensitive") {
  fs::path a = tmpdir() / "a.bin";
  fs::path b = tmpdir() / "b.bin";
  std::ofstream(a, std::ios::binary) << "hello";
  std::ofstream(b, std::ios::binary) << "hellp";
  CHECK(file_fnv1a(a) == file_fnv1a(a));
  CHECK(file_fnv1a(a) != file_fnv1a(b));
}
