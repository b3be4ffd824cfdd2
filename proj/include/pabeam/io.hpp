#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pabeam/metrics.hpp"
#include "pabeam/types.hpp"

namespace pabeam {

// RF binary format: 8-byte magic "PARF0001", then little-endian u32 M,
// u32 N, f64 fs, f64 t0, then M*N float32 samples channel-major.
void write_rf(const RfFrame& frame, const std::filesystem::path& path);
RfFrame read_rf(const std::filesystem::path& path);

// Binary PGM (P5) mapping [-dynamic_range, 0] dB linearly to [0, 255],
// round-half-up.
void write_pgm(const Image2D& db, double dynamic_range,
               const std::filesystem::path& path);

// Tabular text: '#'-prefixed header naming grid extents and units, then one
// row per axial line, lateral columns, full double precision.
void write_tabular(const Image2D& image, const ImagingGrid& grid,
                   const std::string& kind, const std::filesystem::path& path);

struct TabularImage {
  Image2D image;
  double lateral_min_mm = 0.0, lateral_step_mm = 0.0;
  double axial_min_mm = 0.0, axial_step_mm = 0.0;
};
TabularImage read_tabular(const std::filesystem::path& path);

void write_profile(const LateralProfile& profile,
                   const std::filesystem::path& path);

// FNV-1a 64-bit fingerprint of a file's bytes, hex string.
std::string file_fnv1a(const std::filesystem::path& path);

}  // namespace pabeam
