#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pabeam/error.hpp"

namespace pabeam {

struct PointAbsorber {
  double lateral = 0.0;    // m
  double axial = 0.0;      // m, depth >= 0
  double amplitude = 1.0;  // dimensionless initial-pressure weight
};

// Rectangular extent absorbers must stay inside.
struct PhantomExtent {
  double lateral_min, lateral_max;
  double axial_min, axial_max;
};

// Provenance of a generated random background field, kept so reports can
// state how a cloud was produced.
struct BackgroundField {
  double density_per_m2 = 0.0;
  double amplitude = 0.0;
  PhantomExtent extent{};
  std::uint64_t seed = 0;
};

class Phantom {
 public:
  Phantom(std::vector<PointAbsorber> absorbers, PhantomExtent extent,
          std::optional<BackgroundField> background = std::nullopt);

  const std::vector<PointAbsorber>& absorbers() const { return absorbers_; }
  const PhantomExtent& extent() const { return extent_; }
  const std::optional<BackgroundField>& background() const {
    return background_;
  }

 private:
  std::vector<PointAbsorber> absorbers_;
  PhantomExtent extent_;
  std::optional<BackgroundField> background_;
};

// 21 absorbers in 7 rows every 5 mm starting at 25 mm depth; each row has an
// on-axis absorber plus a pair split by the row's lateral separation.
Phantom make_point_grid_phantom();

struct CystSpec {
  double slab_lateral_min = -10e-3;
  double slab_lateral_max = 10e-3;
  double slab_axial_min = 5e-3;
  double slab_axial_max = 35e-3;
  double density_per_m2 = 10e6;  // 10 per mm^2
  double amplitude = 1.0;
  double cyst_radius = 4e-3;
  std::vector<std::pair<double, double>> cyst_centers = {{0.0, 15e-3},
                                                         {0.0, 24e-3}};
  std::uint64_t seed = 424242;
};

// Uniform random absorber slab with non-absorbing disk exclusions.
Phantom make_cyst_phantom(const CystSpec& spec = CystSpec{});

struct LowContrastSpec {
  double background_density_per_m2 = 5e6;
  double background_amplitude = 0.05;
  PhantomExtent background_extent{-10e-3, 10e-3, 20e-3, 45e-3};
  std::uint64_t seed = 31415;
};

// Four on-axis absorbers at 25..40 mm over a weak random background.
Phantom make_low_contrast_phantom(const LowContrastSpec& spec =
                                      LowContrastSpec{});

// Two on-axis absorbers at 30 mm and 50 mm.
Phantom make_two_wire_phantom();

// Inline absorber list; the extent is the bounding box plus a small margin.
Phantom make_custom_phantom(std::vector<PointAbsorber> absorbers);

}  // namespace pabeam
