#include "pabeam/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pabeam {

Phantom::Phantom(std::vector<PointAbsorber> absorbers, PhantomExtent extent,
                 std::optional<BackgroundField> background)
    : absorbers_(std::move(absorbers)), extent_(extent),
      background_(std::move(background)) {
  if (absorbers_.empty())
    throw Error("domain_error", "phantom has no absorbers");
  for (const auto& a : absorbers_) {
    if (!(a.axial >= 0.0))
      throw Error("domain_error", "absorber axial position must be >= 0");
    if (!std::isfinite(a.amplitude) || a.amplitude < 0.0)
      throw Error("domain_error", "absorber amplitude must be finite and >= 0");
    if (a.lateral < extent_.lateral_min || a.lateral > extent_.lateral_max ||
        a.axial < extent_.axial_min || a.axial > extent_.axial_max)
      throw Error("domain_error", "absorber outside declared phantom extent");
  }
}

Phantom make_point_grid_phantom() {
  const double first_depth = 25e-3;
  const double depth_step = 5e-3;
  const double separations[] = {4.6e-3, 5.5e-3, 6.4e-3, 7.2e-3,
                                7.7e-3, 8.5e-3, 9.1e-3};
  std::vector<PointAbsorber> abs;
  for (int row = 0; row < 7; ++row) {
    double z = first_depth + row * depth_step;
    double s = separations[row];
    abs.push_back({0.0, z, 1.0});
    abs.push_back({-0.5 * s, z, 1.0});
    abs.push_back({+0.5 * s, z, 1.0});
  }
  return Phantom(std::move(abs), {-5e-3, 5e-3, 24e-3, 56e-3});
}

Phantom make_cyst_phantom(const CystSpec& spec) {
  const double area = (spec.slab_lateral_max - spec.slab_lateral_min) *
                      (spec.slab_axial_max - spec.slab_axial_min);
  const auto n = static_cast<std::size_t>(
      std::llround(spec.density_per_m2 * area));
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> ux(spec.slab_lateral_min,
                                            spec.slab_lateral_max);
  std::uniform_real_distribution<double> uz(spec.slab_axial_min,
                                            spec.slab_axial_max);
  std::vector<PointAbsorber> abs;
  abs.reserve(n);
  const double r2 = spec.cyst_radius * spec.cyst_radius;
  for (std::size_t i = 0; i < n; ++i) {
    double x = ux(rng);
    double z = uz(rng);
    bool inside = false;
    for (const auto& [cx, cz] : spec.cyst_centers) {
      double dx = x - cx, dz = z - cz;
      if (dx * dx + dz * dz < r2) {
        inside = true;
        break;
      }
    }
    if (!inside) abs.push_back({x, z, spec.amplitude});
  }
  PhantomExtent ext{spec.slab_lateral_min, spec.slab_lateral_max,
                    spec.slab_axial_min, spec.slab_axial_max};
  BackgroundField bg{spec.density_per_m2, spec.amplitude, ext, spec.seed};
  return Phantom(std::move(abs), ext, bg);
}

Phantom make_low_contrast_phantom(const LowContrastSpec& spec) {
  std::vector<PointAbsorber> abs;
  for (int i = 0; i < 4; ++i)
    abs.push_back({0.0, 25e-3 + i * 5e-3, 1.0});

  const auto& e = spec.background_extent;
  const double area = (e.lateral_max - e.lateral_min) *
                      (e.axial_max - e.axial_min);
  const auto n = static_cast<std::size_t>(
      std::llround(spec.background_density_per_m2 * area));
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> ux(e.lateral_min, e.lateral_max);
  std::uniform_real_distribution<double> uz(e.axial_min, e.axial_max);
  for (std::size_t i = 0; i < n; ++i)
    abs.push_back({ux(rng), uz(rng), spec.background_amplitude});

  PhantomExtent ext{e.lateral_min, e.lateral_max,
                    std::min(e.axial_min, 25e-3), std::max(e.axial_max, 40e-3)};
  BackgroundField bg{spec.background_density_per_m2, spec.background_amplitude,
                     e, spec.seed};
  return Phantom(std::move(abs), ext, bg);
}

Phantom make_two_wire_phantom() {
  std::vector<PointAbsorber> abs = {{0.0, 30e-3, 1.0}, {0.0, 50e-3, 1.0}};
  return Phantom(std::move(abs), {-1e-3, 1e-3, 29e-3, 51e-3});
}

Phantom make_custom_phantom(std::vector<PointAbsorber> absorbers) {
  if (absorbers.empty())
    throw Error("domain_error", "custom phantom has no absorbers");
  PhantomExtent ext{absorbers[0].lateral, absorbers[0].lateral,
                    absorbers[0].axial, absorbers[0].axial};
  for (const auto& a : absorbers) {
    ext.lateral_min = std::min(ext.lateral_min, a.lateral);
    ext.lateral_max = std::max(ext.lateral_max, a.lateral);
    ext.axial_min = std::min(ext.axial_min, a.axial);
    ext.axial_max = std::max(ext.axial_max, a.axial);
  }
  const double margin = 1e-3;
  ext.lateral_min -= margin;
  ext.lateral_max += margin;
  ext.axial_min = std::max(0.0, ext.axial_min - margin);
  ext.axial_max += margin;
  return Phantom(std::move(absorbers), ext);
}

}  // namespace pabeam
