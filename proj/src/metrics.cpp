#include "pabeam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pabeam/error.hpp"

namespace pabeam {

RegionSpec RegionSpec::rectangle(double lat_min, double lat_max, double ax_min,
                                 double ax_max) {
  if (!(lat_max > lat_min) || !(ax_max > ax_min))
    throw Error("domain_error", "degenerate rectangle region");
  RegionSpec r;
  r.shape = Shape::kRectangle;
  r.lateral_min = lat_min;
  r.lateral_max = lat_max;
  r.axial_min = ax_min;
  r.axial_max = ax_max;
  return r;
}

RegionSpec RegionSpec::disk(double center_lat, double center_ax,
                            double radius) {
  if (!(radius > 0.0)) throw Error("domain_error", "disk radius must be > 0");
  RegionSpec r;
  r.shape = Shape::kDisk;
  r.center_lateral = center_lat;
  r.center_axial = center_ax;
  r.radius = radius;
  return r;
}

bool RegionSpec::contains(double lateral, double axial) const {
  if (shape == Shape::kRectangle)
    return lateral >= lateral_min && lateral <= lateral_max &&
           axial >= axial_min && axial <= axial_max;
  const double dx = lateral - center_lateral;
  const double dz = axial - center_axial;
  return dx * dx + dz * dz <= radius * radius;
}

std::vector<double> region_values(const Image2D& image, const ImagingGrid& grid,
                                  const RegionSpec& region) {
  std::vector<double> out;
  for (int j = 0; j < grid.n_axial(); ++j) {
    const double z = grid.axial(j);
    for (int i = 0; i < grid.n_lateral(); ++i)
      if (region.contains(grid.lateral(i), z)) out.push_back(image.at(j, i));
  }
  if (out.size() < 2)
    throw Error("region_empty", "region covers fewer than 2 grid pixels");
  return out;
}

namespace {

struct Stats {
  double max, min, mean, stddev;
};

Stats stats_of(const std::vector<double>& v) {
  double mx = v[0], mn = v[0], sum = 0.0;
  for (double x : v) {
    mx = std::max(mx, x);
    mn = std::min(mn, x);
    sum += x;
  }
  const double mean = sum / v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return {mx, mn, mean, std::sqrt(var / v.size())};
}

}  // namespace

double snr_region(const Image2D& envelope, const ImagingGrid& grid,
                  const RegionSpec& region) {
  const Stats s = stats_of(region_values(envelope, grid, region));
  if (s.stddev <= 0.0)
    throw Error("constant_region", "region standard deviation is zero");
  return 20.0 * std::log10((s.max - s.min) / s.stddev);
}

double snr_target_background(const Image2D& envelope, const ImagingGrid& grid,
                             const RegionSpec& target,
                             const RegionSpec& background) {
  const Stats sig = stats_of(region_values(envelope, grid, target));
  const Stats bg = stats_of(region_values(envelope, grid, background));
  if (bg.stddev <= 0.0)
    throw Error("constant_region", "background standard deviation is zero");
  return 20.0 * std::log10((sig.max - sig.min) / bg.stddev);
}

LateralProfile lateral_profile(const Image2D& db, const ImagingGrid& grid,
                               double depth) {
  if (depth < grid.axial_min() - 0.5 * grid.axial_step() ||
      depth > grid.axial_max() + 0.5 * grid.axial_step())
    throw Error("depth_outside_grid", "requested depth outside the grid");
  const int j = grid.nearest_axial_index(depth);
  LateralProfile p;
  p.depth = grid.axial(j);
  p.lateral.resize(grid.n_lateral());
  p.value.resize(grid.n_lateral());
  for (int i = 0; i < grid.n_lateral(); ++i) {
    p.lateral[i] = grid.lateral(i);
    p.value[i] = db.at(j, i);
  }
  return p;
}

double fwhm_lateral(const Image2D& db, const ImagingGrid& grid, double depth,
                    double window_min, double window_max) {
  const LateralProfile p = lateral_profile(db, grid, depth);
  const int n = static_cast<int>(p.value.size());
  int peak = -1;
  for (int i = 0; i < n; ++i) {
    if (p.lateral[i] < window_min || p.lateral[i] > window_max) continue;
    if (peak < 0 || p.value[i] > p.value[peak]) peak = i;
  }
  if (peak < 0)
    throw Error("fwhm_no_peak", "peak window contains no profile samples");
  const double threshold = p.value[peak] - 3.0;

  int left = peak;
  while (left > 0 && p.value[left] >= threshold) --left;
  if (p.value[left] >= threshold)
    throw Error("fwhm_contour", "-3 dB contour exits the grid on the left");
  const double xl =
      p.lateral[left] + (threshold - p.value[left]) /
                            (p.value[left + 1] - p.value[left]) *
                            (p.lateral[left + 1] - p.lateral[left]);

  int right = peak;
  while (right < n - 1 && p.value[right] >= threshold) ++right;
  if (p.value[right] >= threshold)
    throw Error("fwhm_contour", "-3 dB contour exits the grid on the right");
  const double xr =
      p.lateral[right - 1] + (threshold - p.value[right - 1]) /
                                 (p.value[right] - p.value[right - 1]) *
                                 (p.lateral[right] - p.lateral[right - 1]);
  return xr - xl;
}

double contrast_ratio(const Image2D& envelope, const ImagingGrid& grid,
                      const RegionSpec& cyst, const RegionSpec& background) {
  const Stats sc = stats_of(region_values(envelope, grid, cyst));
  const Stats sb = stats_of(region_values(envelope, grid, background));
  if (!(sb.mean > 0.0))
    throw Error("zero_background", "background mean is zero");
  return 20.0 * std::log10(sc.mean / sb.mean);
}

double sidelobe_level(const LateralProfile& profile, double half_width) {
  if (!(half_width > 0.0))
    throw Error("domain_error", "half_width must be > 0");
  const int n = static_cast<int>(profile.value.size());
  int peak = 0;
  for (int i = 1; i < n; ++i)
    if (profile.value[i] > profile.value[peak]) peak = i;
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < n; ++i) {
    if (std::abs(profile.lateral[i] - profile.lateral[peak]) <= half_width)
      continue;
    best = std::max(best, profile.value[i]);
    any = true;
  }
  if (!any)
    throw Error("exclusion_covers_profile",
                "mainlobe exclusion covers the whole profile");
  return best - profile.value[peak];
}

double out_of_mainlobe_energy_fraction(const Image2D& envelope,
                                       const ImagingGrid& grid, double depth,
                                       double half_width) {
  const int j = grid.nearest_axial_index(depth);
  int peak = 0;
  for (int i = 1; i < grid.n_lateral(); ++i)
    if (envelope.at(j, i) > envelope.at(j, peak)) peak = i;
  const double x0 = grid.lateral(peak);
  double total = 0.0, outside = 0.0;
  for (int i = 0; i < grid.n_lateral(); ++i) {
    const double e2 = envelope.at(j, i) * envelope.at(j, i);
    total += e2;
    if (std::abs(grid.lateral(i) - x0) > half_width) outside += e2;
  }
  if (total <= 0.0) throw Error("zero_envelope", "all-zero envelope row");
  return outside / total;
}

}  // namespace pabeam
