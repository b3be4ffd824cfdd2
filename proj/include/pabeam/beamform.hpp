#pragma once

#include <complex>
#include <span>
#include <string>

#include "pabeam/kernels.hpp"
#include "pabeam/types.hpp"

namespace pabeam {

enum class Method { kDas, kDmas, kDsdmas };

Method parse_method(const std::string& name);
std::string method_name(Method m);
KernelMode parse_mode(const std::string& name);
std::string mode_name(KernelMode m);

enum class Interpolation { kLinear, kNearest };

// One-way photoacoustic delay in fractional samples:
// delta = (sqrt((x_p - x_e)^2 + z_p^2) / c_bf - t0) * fs.
double compute_delay(double pixel_lateral, double pixel_axial,
                     double element_position, double c_bf, double fs,
                     double t0);

// Linear interpolation between adjacent samples; exactly 0 outside [0, N-1].
double sample_at(std::span<const double> channel, double delta);
std::complex<double> sample_at(std::span<const std::complex<double>> channel,
                               double delta);

double sample_at_nearest(std::span<const double> channel, double delta);

struct BeamformConfig {
  Method method = Method::kDas;
  KernelMode mode = KernelMode::kFast;
  Interpolation interpolation = Interpolation::kLinear;
  double sound_speed = 1540.0;  // beamforming speed, may differ from the
                                // simulation medium
};

// Real-sample beamformer over the pixel grid (raw pre-envelope output).
// The pixel loop is OpenMP-parallel; every pixel writes its own cell, so the
// result is identical for any worker count.
Image2D beamform_image(const RfFrame& frame, const ImagingGrid& grid,
                       const ArrayGeometry& geometry,
                       const BeamformConfig& config);

// Plain serial loop kept as the reference implementation for tests and the
// benchmark baseline.
Image2D beamform_image_serial(const RfFrame& frame, const ImagingGrid& grid,
                              const ArrayGeometry& geometry,
                              const BeamformConfig& config);

// Analytic-signal path: channels are converted to their analytic form once,
// the kernels run on complex samples with the phase-preserving square root,
// and each pixel's envelope is the modulus of the kernel output. raw holds
// the real part.
struct AnalyticBeamform {
  Image2D raw;
  Image2D envelope;
};

AnalyticBeamform beamform_analytic(const RfFrame& frame,
                                   const ImagingGrid& grid,
                                   const ArrayGeometry& geometry,
                                   const BeamformConfig& config);

AnalyticBeamform beamform_analytic_serial(const RfFrame& frame,
                                          const ImagingGrid& grid,
                                          const ArrayGeometry& geometry,
                                          const BeamformConfig& config);

}  // namespace pabeam
