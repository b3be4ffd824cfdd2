#include "pabeam/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace pabeam {

namespace {

constexpr char kMagic[8] = {'P', 'A', 'R', 'F', '0', '0', '0', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xFF;
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (bits >> (8 * i)) & 0xFF;
  os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void put_f32(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(os, bits);
}

}  // namespace

void write_rf(const RfFrame& frame, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("io_error", "cannot open " + path.string());
  os.write(kMagic, 8);
  put_u32(os, static_cast<std::uint32_t>(frame.num_elements()));
  put_u32(os, static_cast<std::uint32_t>(frame.num_samples()));
  put_f64(os, frame.sample_rate());
  put_f64(os, frame.start_time());
  for (double v : frame.data()) put_f32(os, static_cast<float>(v));
  if (!os) throw Error("io_error", "write failed for " + path.string());
}

RfFrame read_rf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("io_error", "cannot open " + path.string());
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kMagic, 8) != 0)
    throw Error("rf_bad_magic", "not a PARF0001 file: " + path.string());
  const std::uint32_t m = get_u32(is);
  const std::uint32_t n = get_u32(is);
  const double fs = get_f64(is);
  const double t0 = get_f64(is);
  if (!is) throw Error("rf_truncated", "truncated header: " + path.string());
  const std::size_t count = std::size_t(m) * n;
  std::vector<std::uint32_t> raw(count);
  std::vector<double> data(count);
  is.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(count * 4));
  if (static_cast<std::size_t>(is.gcount()) != count * 4)
    throw Error("rf_truncated", "truncated payload: " + path.string());
  is.peek();
  if (!is.eof())
    throw Error("rf_truncated",
                "trailing bytes after payload: " + path.string());
  for (std::size_t i = 0; i < count; ++i) {
    float f;
    std::memcpy(&f, &raw[i], 4);  // file is little-endian; host assumed LE
    data[i] = static_cast<double>(f);
  }
  return RfFrame(static_cast<int>(m), static_cast<int>(n), fs, t0,
                 std::move(data));
}

void write_pgm(const Image2D& db, double dynamic_range,
               const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("io_error", "cannot open " + path.string());
  os << "P5\n" << db.n_lateral << " " << db.n_axial << "\n255\n";
  std::vector<unsigned char> row(db.n_lateral);
  for (int j = 0; j < db.n_axial; ++j) {
    for (int i = 0; i < db.n_lateral; ++i) {
      double g = std::floor((db.at(j, i) + dynamic_range) / dynamic_range *
                                255.0 +
                            0.5);
      row[i] = static_cast<unsigned char>(std::clamp(g, 0.0, 255.0));
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!os) throw Error("io_error", "write failed for " + path.string());
}

void write_tabular(const Image2D& image, const ImagingGrid& grid,
                   const std::string& kind,
                   const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("io_error", "cannot open " + path.string());
  char buf[64];
  os << "# pabeam tabular image v1\n";
  os << "# kind " << kind << "\n";
  os << "# units mm lateral (columns), mm axial (rows), values "
     << (kind == "db" ? "dB" : "linear") << "\n";
  os << "# lateral_min_mm " << grid.lateral_min() * 1e3 << "\n";
  os << "# lateral_step_mm " << grid.lateral_step() * 1e3 << "\n";
  os << "# n_lateral " << grid.n_lateral() << "\n";
  os << "# axial_min_mm " << grid.axial_min() * 1e3 << "\n";
  os << "# axial_step_mm " << grid.axial_step() * 1e3 << "\n";
  os << "# n_axial " << grid.n_axial() << "\n";
  for (int j = 0; j < image.n_axial; ++j) {
    for (int i = 0; i < image.n_lateral; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", image.at(j, i));
      os << buf << (i + 1 < image.n_lateral ? " " : "\n");
    }
  }
  if (!os) throw Error("io_error", "write failed for " + path.string());
}

TabularImage read_tabular(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("io_error", "cannot open " + path.string());
  TabularImage out;
  int n_lat = -1, n_ax = -1;
  std::string line;
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      if (key == "lateral_min_mm") ls >> out.lateral_min_mm;
      else if (key == "lateral_step_mm") ls >> out.lateral_step_mm;
      else if (key == "axial_min_mm") ls >> out.axial_min_mm;
      else if (key == "axial_step_mm") ls >> out.axial_step_mm;
      else if (key == "n_lateral") ls >> n_lat;
      else if (key == "n_axial") ls >> n_ax;
      continue;
    }
    std::istringstream ls(line);
    double v;
    while (ls >> v) values.push_back(v);
  }
  if (n_lat <= 0 || n_ax <= 0 ||
      values.size() != std::size_t(n_lat) * std::size_t(n_ax))
    throw Error("format_error", "malformed tabular image: " + path.string());
  out.image.n_lateral = n_lat;
  out.image.n_axial = n_ax;
  out.image.values = std::move(values);
  return out;
}

void write_profile(const LateralProfile& profile,
                   const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("io_error", "cannot open " + path.string());
  char buf[96];
  os << "# pabeam lateral profile, depth_mm " << profile.depth * 1e3 << "\n";
  os << "# columns: lateral_mm value_db\n";
  for (std::size_t i = 0; i < profile.lateral.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", profile.lateral[i] * 1e3,
                  profile.value[i]);
    os << buf << "\n";
  }
  if (!os) throw Error("io_error", "write failed for " + path.string());
}

std::string file_fnv1a(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("io_error", "cannot open " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  char buf[4096];
  while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (is.eof()) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return out;
}

}  // namespace pabeam
