#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pabeam/beamform.hpp"
#include "pabeam/io.hpp"
#include "pabeam/metrics.hpp"
#include "pabeam/phantom.hpp"
#include "pabeam/pipeline.hpp"
#include "pabeam/simulate.hpp"

namespace pabeam {

enum class EnvelopeMode { kAnalytic, kColumnHilbert };
enum class Normalization { kPerImage, kJoint };

struct PhantomSpec {
  std::string type;  // point_grid | cyst | low_contrast | two_wire | custom
  CystSpec cyst;
  LowContrastSpec low_contrast;
  std::vector<PointAbsorber> custom_absorbers;

  Phantom build() const;
};

struct ContrastRegionPair {
  double depth_mm = 0.0;
  RegionSpec cyst;
  RegionSpec background;
};

struct MetricsSpec {
  double dynamic_range_db = 120.0;  // metrics-side dB floor
  std::vector<double> target_depths;  // m
  double snr_lateral_halfwidth = 2e-3;
  double snr_axial_halfwidth = 1e-3;
  double snr_background_lateral = -15e-3;
  double snr_background_halfwidth = 3e-3;
  double fwhm_window_halfwidth = 2e-3;
  // Per-target sidelobe exclusion half-widths; when empty the adaptive
  // 2 x FWHM default applies.
  std::vector<double> sidelobe_halfwidths;  // m
  std::vector<double> profile_depths;       // m
  std::vector<ContrastRegionPair> contrast;
};

struct Scenario {
  std::string name;
  PhantomSpec phantom;
  int num_elements = 128;
  double pitch = 0.3e-3;
  double medium_sound_speed = 1540.0;
  double beamform_sound_speed = 1540.0;
  double pulse_f0 = 7e6;
  double pulse_bandwidth = 0.77;
  double sample_rate = 40e6;
  std::optional<double> noise_snr_db;  // absent = noiseless
  std::uint64_t noise_seed = 0;
  double grid_lateral_min = -20e-3, grid_lateral_max = 20e-3;
  double grid_axial_min = 0.0, grid_axial_max = 60e-3;
  double grid_lateral_step = 0.1e-3, grid_axial_step = 0.1e-3;
  std::vector<Method> methods;
  KernelMode mode = KernelMode::kFast;
  Interpolation interpolation = Interpolation::kLinear;
  EnvelopeMode envelope_mode = EnvelopeMode::kAnalytic;
  double display_dynamic_range = 60.0;
  Normalization normalization = Normalization::kPerImage;
  MetricsSpec metrics;

  ImagingGrid grid() const;
  ArrayGeometry geometry() const;
};

// Parses and validates a scenario config; diagnostics name the offending key.
Scenario load_scenario(const std::filesystem::path& config_path);

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<Method>> methods;
  std::optional<KernelMode> mode;
  std::optional<double> dynamic_range;
};

void apply_overrides(Scenario& scenario, const ScenarioOverrides& overrides);

struct MethodImages {
  Method method;
  BeamformedImage display;  // db at the display dynamic range
  Image2D metrics_db;       // db at the metrics dynamic range
};

struct ScenarioResult {
  Scenario scenario;
  RfFrame frame;
  std::vector<MethodImages> images;
  MetricsReport report;
};

// Simulation duration covering both the phantom and the far grid corner.
double scenario_duration(const Scenario& scenario, const Phantom& phantom);

RfFrame simulate_scenario_rf(const Scenario& scenario);

// Full pipeline: simulate (or take a provided frame), beamform every method,
// form display/metrics images, evaluate the metric requests.
ScenarioResult run_scenario(const Scenario& scenario,
                            const std::optional<RfFrame>& frame = std::nullopt,
                            const std::string& config_hash = "");

// Writes rf.parf, per-method images, profiles, metrics.json and
// provenance.json into out_dir.
void write_scenario_artifacts(const ScenarioResult& result,
                              const std::filesystem::path& out_dir);

MetricsReport compute_metrics(const Scenario& scenario,
                              const std::vector<MethodImages>& images,
                              const std::string& config_hash);

std::string report_to_json(const MetricsReport& report);

}  // namespace pabeam
