#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pabeam/types.hpp"

namespace pabeam {

// Rectangle or disk region in grid coordinates (meters).
struct RegionSpec {
  enum class Shape { kRectangle, kDisk };
  Shape shape = Shape::kRectangle;
  // rectangle: [lateral_min, lateral_max] x [axial_min, axial_max]
  double lateral_min = 0.0, lateral_max = 0.0;
  double axial_min = 0.0, axial_max = 0.0;
  // disk
  double center_lateral = 0.0, center_axial = 0.0, radius = 0.0;

  static RegionSpec rectangle(double lat_min, double lat_max, double ax_min,
                              double ax_max);
  static RegionSpec disk(double center_lat, double center_ax, double radius);
  bool contains(double lateral, double axial) const;
};

// Values of an image inside a region; errors when fewer than 2 pixels fall
// inside the grid intersection.
std::vector<double> region_values(const Image2D& image, const ImagingGrid& grid,
                                  const RegionSpec& region);

// 20*log10((max - min) / std) over the region, population standard deviation.
double snr_region(const Image2D& envelope, const ImagingGrid& grid,
                  const RegionSpec& region);

// Two-region variant: signal range over the target region, standard
// deviation over a target-free background region.
double snr_target_background(const Image2D& envelope, const ImagingGrid& grid,
                             const RegionSpec& target,
                             const RegionSpec& background);

struct LateralProfile {
  double depth = 0.0;  // actual row depth used
  std::vector<double> lateral;
  std::vector<double> value;
};

// db-image row nearest to the requested depth.
LateralProfile lateral_profile(const Image2D& db, const ImagingGrid& grid,
                               double depth);

// -3 dB width of the connected interval around the profile peak found inside
// [window_min, window_max]; crossings located by linear interpolation.
double fwhm_lateral(const Image2D& db, const ImagingGrid& grid, double depth,
                    double window_min, double window_max);

// 20*log10(mean(cyst) / mean(background)) over envelope values.
double contrast_ratio(const Image2D& envelope, const ImagingGrid& grid,
                      const RegionSpec& cyst, const RegionSpec& background);

// Maximum profile value outside +-half_width of the profile peak, relative
// to the peak (dB when fed dB profiles).
double sidelobe_level(const LateralProfile& profile, double half_width);

// Fraction of squared envelope row energy outside +-half_width of the row's
// peak; the comparison window is method-independent by construction.
double out_of_mainlobe_energy_fraction(const Image2D& envelope,
                                       const ImagingGrid& grid, double depth,
                                       double half_width);

// ---- scenario-level report ----------------------------------------------

struct DepthMetrics {
  double depth_mm = 0.0;
  double snr_db = 0.0;          // two-region form (see provenance)
  double snr_region_db = 0.0;   // single-region form, std over the target
  std::optional<double> fwhm_mm;
  std::optional<double> sidelobe_db;
};

struct CrMetrics {
  double depth_mm = 0.0;
  double cr_db = 0.0;
};

struct MethodMetrics {
  std::string method;
  std::vector<DepthMetrics> depths;
  std::vector<CrMetrics> contrast;
};

struct MetricsReport {
  std::string scenario;
  std::vector<MethodMetrics> methods;
  // provenance
  std::string noise_convention;
  std::string snr_convention;
  std::string envelope_mode;
  double metrics_dynamic_range_db = 120.0;
  std::string region_note;
  std::uint64_t noise_seed = 0;
  std::string config_hash;
  std::string tool_version;
};

}  // namespace pabeam
