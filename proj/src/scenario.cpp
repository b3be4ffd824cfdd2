#include "pabeam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "pabeam/version.hpp"

namespace pabeam {

using nlohmann::json;

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw Error("config_invalid", "key '" + key + "': " + why);
}

const json& need(const json& obj, const std::string& key,
                 const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) bad_key(path, "missing");
  return *it;
}

double need_number(const json& obj, const std::string& key,
                   const std::string& path) {
  const json& v = need(obj, key, path);
  if (!v.is_number()) bad_key(path, "must be a number");
  return v.get<double>();
}

double opt_number(const json& obj, const std::string& key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) bad_key(key, "must be a number");
  return it->get<double>();
}

std::string need_string(const json& obj, const std::string& key,
                        const std::string& path) {
  const json& v = need(obj, key, path);
  if (!v.is_string()) bad_key(path, "must be a string");
  return v.get<std::string>();
}

RegionSpec parse_disk(const json& obj, const std::string& path) {
  return RegionSpec::disk(need_number(obj, "center_lateral_mm", path) * 1e-3,
                          need_number(obj, "center_axial_mm", path) * 1e-3,
                          need_number(obj, "radius_mm", path) * 1e-3);
}

PhantomSpec parse_phantom(const json& p) {
  PhantomSpec spec;
  spec.type = need_string(p, "type", "phantom.type");
  if (spec.type == "point_grid" || spec.type == "two_wire") {
    return spec;
  }
  if (spec.type == "cyst") {
    CystSpec& c = spec.cyst;
    c.seed = static_cast<std::uint64_t>(opt_number(p, "seed", double(c.seed)));
    c.density_per_m2 = opt_number(p, "density_per_mm2", 10.0) * 1e6;
    c.amplitude = opt_number(p, "amplitude", 1.0);
    c.cyst_radius = opt_number(p, "radius_mm", 4.0) * 1e-3;
    if (p.contains("slab")) {
      const json& s = p["slab"];
      c.slab_lateral_min = need_number(s, "lateral_min_mm", "phantom.slab") * 1e-3;
      c.slab_lateral_max = need_number(s, "lateral_max_mm", "phantom.slab") * 1e-3;
      c.slab_axial_min = need_number(s, "axial_min_mm", "phantom.slab") * 1e-3;
      c.slab_axial_max = need_number(s, "axial_max_mm", "phantom.slab") * 1e-3;
    }
    if (p.contains("centers_mm")) {
      c.cyst_centers.clear();
      for (const auto& cc : p["centers_mm"]) {
        if (!cc.is_array() || cc.size() != 2)
          bad_key("phantom.centers_mm", "entries must be [lateral, axial]");
        c.cyst_centers.emplace_back(cc[0].get<double>() * 1e-3,
                                    cc[1].get<double>() * 1e-3);
      }
    }
    return spec;
  }
  if (spec.type == "low_contrast") {
    LowContrastSpec& lc = spec.low_contrast;
    lc.seed = static_cast<std::uint64_t>(opt_number(p, "seed", double(lc.seed)));
    lc.background_density_per_m2 =
        opt_number(p, "background_density_per_mm2", 5.0) * 1e6;
    lc.background_amplitude = opt_number(p, "background_amplitude", 0.05);
    if (p.contains("background_extent_mm")) {
      const json& e = p["background_extent_mm"];
      lc.background_extent = {
          need_number(e, "lateral_min", "phantom.background_extent_mm") * 1e-3,
          need_number(e, "lateral_max", "phantom.background_extent_mm") * 1e-3,
          need_number(e, "axial_min", "phantom.background_extent_mm") * 1e-3,
          need_number(e, "axial_max", "phantom.background_extent_mm") * 1e-3};
    }
    return spec;
  }
  if (spec.type == "custom") {
    const json& arr = need(p, "absorbers", "phantom.absorbers");
    if (!arr.is_array() || arr.empty())
      bad_key("phantom.absorbers", "must be a non-empty array");
    for (const auto& a : arr)
      spec.custom_absorbers.push_back(
          {need_number(a, "lateral_mm", "phantom.absorbers[].lateral_mm") * 1e-3,
           need_number(a, "axial_mm", "phantom.absorbers[].axial_mm") * 1e-3,
           opt_number(a, "amplitude", 1.0)});
    return spec;
  }
  bad_key("phantom.type", "unknown type '" + spec.type + "'");
}

std::vector<double> parse_depths_mm(const json& arr, const std::string& path) {
  if (!arr.is_array()) bad_key(path, "must be an array of depths in mm");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) bad_key(path, "entries must be numbers");
    out.push_back(v.get<double>() * 1e-3);
  }
  return out;
}

}  // namespace

Phantom PhantomSpec::build() const {
  if (type == "point_grid") return make_point_grid_phantom();
  if (type == "cyst") return make_cyst_phantom(cyst);
  if (type == "low_contrast") return make_low_contrast_phantom(low_contrast);
  if (type == "two_wire") return make_two_wire_phantom();
  if (type == "custom") return make_custom_phantom(custom_absorbers);
  throw Error("config_invalid", "unknown phantom type '" + type + "'");
}

ImagingGrid Scenario::grid() const {
  return ImagingGrid(grid_lateral_min, grid_lateral_max, grid_axial_min,
                     grid_axial_max, grid_lateral_step, grid_axial_step);
}

ArrayGeometry Scenario::geometry() const {
  return ArrayGeometry(num_elements, pitch);
}

Scenario load_scenario(const std::filesystem::path& config_path) {
  std::ifstream is(config_path);
  if (!is)
    throw Error("io_error", "cannot open config " + config_path.string());
  json cfg;
  try {
    is >> cfg;
  } catch (const json::exception& e) {
    throw Error("config_invalid", std::string("JSON parse error: ") + e.what());
  }

  Scenario s;
  s.name = need_string(cfg, "name", "name");
  s.phantom = parse_phantom(need(cfg, "phantom", "phantom"));

  const json& arr = need(cfg, "array", "array");
  s.num_elements = static_cast<int>(need_number(arr, "num_elements",
                                                "array.num_elements"));
  s.pitch = need_number(arr, "pitch_mm", "array.pitch_mm") * 1e-3;

  s.medium_sound_speed = need_number(need(cfg, "medium", "medium"),
                                     "sound_speed_m_per_s",
                                     "medium.sound_speed_m_per_s");

  const json& bf = need(cfg, "beamform", "beamform");
  s.beamform_sound_speed =
      opt_number(bf, "sound_speed_m_per_s", s.medium_sound_speed);
  const json& methods = need(bf, "methods", "beamform.methods");
  if (!methods.is_array() || methods.empty())
    bad_key("beamform.methods", "must be a non-empty array");
  for (const auto& m : methods)
    s.methods.push_back(parse_method(m.get<std::string>()));
  s.mode = parse_mode(bf.value("mode", "fast"));
  const std::string interp = bf.value("interpolation", "linear");
  if (interp == "linear") s.interpolation = Interpolation::kLinear;
  else if (interp == "nearest") s.interpolation = Interpolation::kNearest;
  else bad_key("beamform.interpolation", "must be linear or nearest");
  const std::string env = bf.value("envelope", "analytic");
  if (env == "analytic") s.envelope_mode = EnvelopeMode::kAnalytic;
  else if (env == "column_hilbert")
    s.envelope_mode = EnvelopeMode::kColumnHilbert;
  else bad_key("beamform.envelope", "must be analytic or column_hilbert");

  const json& pulse = need(cfg, "pulse", "pulse");
  s.pulse_f0 = need_number(pulse, "center_frequency_mhz",
                           "pulse.center_frequency_mhz") * 1e6;
  s.pulse_bandwidth = need_number(pulse, "fractional_bandwidth",
                                  "pulse.fractional_bandwidth");

  s.sample_rate = need_number(need(cfg, "sampling", "sampling"), "fs_mhz",
                              "sampling.fs_mhz") * 1e6;

  if (cfg.contains("noise") && !cfg["noise"].is_null()) {
    const json& noise = cfg["noise"];
    s.noise_snr_db = need_number(noise, "snr_db", "noise.snr_db");
    s.noise_seed = static_cast<std::uint64_t>(
        need_number(noise, "seed", "noise.seed"));
  }

  const json& grid = need(cfg, "grid", "grid");
  s.grid_lateral_min = need_number(grid, "lateral_min_mm", "grid.lateral_min_mm") * 1e-3;
  s.grid_lateral_max = need_number(grid, "lateral_max_mm", "grid.lateral_max_mm") * 1e-3;
  s.grid_axial_min = need_number(grid, "axial_min_mm", "grid.axial_min_mm") * 1e-3;
  s.grid_axial_max = need_number(grid, "axial_max_mm", "grid.axial_max_mm") * 1e-3;
  s.grid_lateral_step = need_number(grid, "lateral_step_mm", "grid.lateral_step_mm") * 1e-3;
  s.grid_axial_step = need_number(grid, "axial_step_mm", "grid.axial_step_mm") * 1e-3;

  if (cfg.contains("display")) {
    const json& d = cfg["display"];
    s.display_dynamic_range = opt_number(d, "dynamic_range_db", 60.0);
    const std::string norm = d.value("normalization", "per_image");
    if (norm == "per_image") s.normalization = Normalization::kPerImage;
    else if (norm == "joint") s.normalization = Normalization::kJoint;
    else bad_key("display.normalization", "must be per_image or joint");
  }

  if (cfg.contains("metrics")) {
    const json& m = cfg["metrics"];
    MetricsSpec& ms = s.metrics;
    ms.dynamic_range_db = opt_number(m, "dynamic_range_db", 120.0);
    if (m.contains("target_depths_mm"))
      ms.target_depths = parse_depths_mm(m["target_depths_mm"],
                                         "metrics.target_depths_mm");
    if (m.contains("snr_region")) {
      const json& r = m["snr_region"];
      ms.snr_lateral_halfwidth =
          opt_number(r, "lateral_halfwidth_mm", 2.0) * 1e-3;
      ms.snr_axial_halfwidth = opt_number(r, "axial_halfwidth_mm", 1.0) * 1e-3;
      ms.snr_background_lateral =
          opt_number(r, "background_lateral_mm", -15.0) * 1e-3;
      ms.snr_background_halfwidth =
          opt_number(r, "background_halfwidth_mm", 3.0) * 1e-3;
    }
    ms.fwhm_window_halfwidth =
        opt_number(m, "fwhm_window_halfwidth_mm", 2.0) * 1e-3;
    if (m.contains("sidelobe_exclusion_halfwidth_mm")) {
      const json& sl = m["sidelobe_exclusion_halfwidth_mm"];
      if (sl.is_number()) {
        ms.sidelobe_halfwidths.assign(ms.target_depths.size(),
                                      sl.get<double>() * 1e-3);
      } else if (sl.is_array()) {
        if (sl.size() != ms.target_depths.size())
          bad_key("metrics.sidelobe_exclusion_halfwidth_mm",
                  "length must match target_depths_mm");
        for (const auto& v : sl)
          ms.sidelobe_halfwidths.push_back(v.get<double>() * 1e-3);
      } else {
        bad_key("metrics.sidelobe_exclusion_halfwidth_mm",
                "must be a number or an array");
      }
    }
    if (m.contains("profile_depths_mm"))
      ms.profile_depths = parse_depths_mm(m["profile_depths_mm"],
                                          "metrics.profile_depths_mm");
    if (m.contains("contrast")) {
      for (const auto& c : m["contrast"]) {
        ContrastRegionPair pair;
        pair.depth_mm = need_number(c, "depth_mm", "metrics.contrast.depth_mm");
        pair.cyst = parse_disk(need(c, "cyst", "metrics.contrast.cyst"),
                               "metrics.contrast.cyst");
        pair.background =
            parse_disk(need(c, "background", "metrics.contrast.background"),
                       "metrics.contrast.background");
        s.metrics.contrast.push_back(pair);
      }
    }
  }

  // cross-field validation
  s.grid();      // throws on inconsistent grid
  s.geometry();  // throws on inconsistent array
  if (!(s.beamform_sound_speed > 0.0))
    bad_key("beamform.sound_speed_m_per_s", "must be > 0");
  if (!(s.sample_rate > 0.0)) bad_key("sampling.fs_mhz", "must be > 0");
  PulseModel(s.pulse_f0, s.pulse_bandwidth);
  return s;
}

void apply_overrides(Scenario& scenario, const ScenarioOverrides& overrides) {
  if (overrides.seed) scenario.noise_seed = *overrides.seed;
  if (overrides.methods) scenario.methods = *overrides.methods;
  if (overrides.mode) scenario.mode = *overrides.mode;
  if (overrides.dynamic_range)
    scenario.display_dynamic_range = *overrides.dynamic_range;
}

double scenario_duration(const Scenario& scenario, const Phantom& phantom) {
  const ArrayGeometry geom = scenario.geometry();
  const MediumModel medium(scenario.medium_sound_speed);
  const PulseModel pulse(scenario.pulse_f0, scenario.pulse_bandwidth);
  double needed = required_duration(phantom, geom, medium, pulse);

  // Also cover the far grid corner so every pixel's delays land inside the
  // frame under either sound speed.
  const double far_lat = std::max(std::abs(scenario.grid_lateral_min),
                                  std::abs(scenario.grid_lateral_max)) +
                         std::abs(geom.position(geom.num_elements() - 1));
  const double far = std::hypot(far_lat, scenario.grid_axial_max);
  const double c_min =
      std::min(scenario.medium_sound_speed, scenario.beamform_sound_speed);
  needed = std::max(needed, far / c_min + pulse.half_support());
  return needed + 2.0 / scenario.sample_rate;
}

RfFrame simulate_scenario_rf(const Scenario& scenario) {
  const Phantom phantom = scenario.phantom.build();
  const ArrayGeometry geom = scenario.geometry();
  const MediumModel medium(scenario.medium_sound_speed);
  const PulseModel pulse(scenario.pulse_f0, scenario.pulse_bandwidth);
  RfFrame frame = simulate_rf(phantom, geom, medium, pulse,
                              scenario.sample_rate,
                              scenario_duration(scenario, phantom));
  if (scenario.noise_snr_db)
    frame = add_noise(frame, *scenario.noise_snr_db, scenario.noise_seed);
  return frame;
}

namespace {

MethodImages form_method_images(const Scenario& scenario, const RfFrame& frame,
                                Method method, double display_max,
                                Image2D* envelope_out) {
  const ImagingGrid grid = scenario.grid();
  const ArrayGeometry geom = scenario.geometry();
  BeamformConfig cfg;
  cfg.method = method;
  cfg.mode = scenario.mode;
  cfg.interpolation = scenario.interpolation;
  cfg.sound_speed = scenario.beamform_sound_speed;

  MethodImages out;
  out.method = method;
  if (scenario.envelope_mode == EnvelopeMode::kAnalytic) {
    AnalyticBeamform ab = beamform_analytic(frame, grid, geom, cfg);
    out.display = form_image_from_envelope(std::move(ab.raw),
                                           std::move(ab.envelope),
                                           scenario.display_dynamic_range,
                                           display_max);
  } else {
    Image2D raw = beamform_image(frame, grid, geom, cfg);
    out.display = form_image(raw, scenario.display_dynamic_range, display_max);
  }
  out.metrics_db = log_compress(out.display.envelope,
                                scenario.metrics.dynamic_range_db);
  if (envelope_out) *envelope_out = out.display.envelope;
  return out;
}

}  // namespace

MetricsReport compute_metrics(const Scenario& scenario,
                              const std::vector<MethodImages>& images,
                              const std::string& config_hash) {
  const ImagingGrid grid = scenario.grid();
  const MetricsSpec& ms = scenario.metrics;

  MetricsReport report;
  report.scenario = scenario.name;
  report.noise_convention = "sigma = rms(clean frame) * 10^(-snr_db/20)";
  report.snr_convention =
      "snr_db: 20*log10((max-min of target rect)/(std of background rect)); "
      "snr_region_db: same ratio with the std taken over the target rect";
  report.envelope_mode = scenario.envelope_mode == EnvelopeMode::kAnalytic
                             ? "analytic"
                             : "column_hilbert";
  report.metrics_dynamic_range_db = ms.dynamic_range_db;
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "snr target rect +-%.3g x +-%.3g mm at lateral 0; "
                  "background rect at lateral %.3g mm, halfwidth %.3g mm",
                  ms.snr_lateral_halfwidth * 1e3, ms.snr_axial_halfwidth * 1e3,
                  ms.snr_background_lateral * 1e3,
                  ms.snr_background_halfwidth * 1e3);
    report.region_note = buf;
  }
  report.noise_seed = scenario.noise_seed;
  report.config_hash = config_hash;
  report.tool_version = kVersion;

  for (const auto& mi : images) {
    MethodMetrics mm;
    mm.method = method_name(mi.method);
    for (std::size_t ti = 0; ti < ms.target_depths.size(); ++ti) {
      const double z = ms.target_depths[ti];
      DepthMetrics dm;
      dm.depth_mm = z * 1e3;
      RegionSpec target = RegionSpec::rectangle(
          -ms.snr_lateral_halfwidth, ms.snr_lateral_halfwidth,
          z - ms.snr_axial_halfwidth, z + ms.snr_axial_halfwidth);
      RegionSpec background = RegionSpec::rectangle(
          ms.snr_background_lateral - ms.snr_background_halfwidth,
          ms.snr_background_lateral + ms.snr_background_halfwidth,
          z - ms.snr_axial_halfwidth, z + ms.snr_axial_halfwidth);
      dm.snr_db = snr_target_background(mi.display.envelope, grid, target,
                                        background);
      dm.snr_region_db = snr_region(mi.display.envelope, grid, target);
      try {
        double w = fwhm_lateral(mi.metrics_db, grid, z,
                                -ms.fwhm_window_halfwidth,
                                ms.fwhm_window_halfwidth);
        dm.fwhm_mm = w * 1e3;
        double half = ti < ms.sidelobe_halfwidths.size()
                          ? ms.sidelobe_halfwidths[ti]
                          : 2.0 * w;
        dm.sidelobe_db =
            sidelobe_level(lateral_profile(mi.metrics_db, grid, z), half);
      } catch (const Error&) {
        // FWHM/sidelobe may be undefined for a scenario (no peak in window);
        // the report records the absent value.
      }
      mm.depths.push_back(dm);
    }
    for (const auto& pair : ms.contrast) {
      CrMetrics cm;
      cm.depth_mm = pair.depth_mm;
      cm.cr_db = contrast_ratio(mi.display.envelope, grid, pair.cyst,
                                pair.background);
      mm.contrast.push_back(cm);
    }
    report.methods.push_back(std::move(mm));
  }
  return report;
}

ScenarioResult run_scenario(const Scenario& scenario,
                            const std::optional<RfFrame>& frame,
                            const std::string& config_hash) {
  RfFrame rf = frame ? *frame : simulate_scenario_rf(scenario);

  double display_max = 0.0;
  std::vector<MethodImages> images;
  if (scenario.normalization == Normalization::kJoint) {
    // First pass finds the joint envelope maximum across methods.
    std::vector<Image2D> envs;
    std::vector<MethodImages> tmp;
    for (Method m : scenario.methods) {
      Image2D env;
      tmp.push_back(form_method_images(scenario, rf, m, 0.0, &env));
      envs.push_back(std::move(env));
    }
    for (const auto& e : envs) display_max = std::max(display_max, image_max(e));
    for (std::size_t i = 0; i < tmp.size(); ++i) {
      tmp[i].display.db = log_compress(tmp[i].display.envelope,
                                       scenario.display_dynamic_range,
                                       display_max);
      images.push_back(std::move(tmp[i]));
    }
  } else {
    for (Method m : scenario.methods)
      images.push_back(form_method_images(scenario, rf, m, 0.0, nullptr));
  }

  ScenarioResult result{scenario, std::move(rf), std::move(images), {}};
  result.report = compute_metrics(scenario, result.images, config_hash);
  return result;
}

std::string report_to_json(const MetricsReport& report) {
  json j;
  j["scenario"] = report.scenario;
  j["provenance"] = {
      {"tool_version", report.tool_version},
      {"config_hash", report.config_hash},
      {"noise_seed", report.noise_seed},
      {"noise_convention", report.noise_convention},
      {"snr_convention", report.snr_convention},
      {"envelope_mode", report.envelope_mode},
      {"metrics_dynamic_range_db", report.metrics_dynamic_range_db},
      {"regions", report.region_note},
  };
  j["methods"] = json::array();
  for (const auto& mm : report.methods) {
    json jm;
    jm["method"] = mm.method;
    jm["depths"] = json::array();
    for (const auto& dm : mm.depths) {
      json jd;
      jd["depth_mm"] = dm.depth_mm;
      jd["snr_db"] = dm.snr_db;
      jd["snr_region_db"] = dm.snr_region_db;
      if (dm.fwhm_mm) jd["fwhm_mm"] = *dm.fwhm_mm;
      if (dm.sidelobe_db) jd["sidelobe_db"] = *dm.sidelobe_db;
      jm["depths"].push_back(jd);
    }
    jm["contrast"] = json::array();
    for (const auto& cm : mm.contrast)
      jm["contrast"].push_back(
          {{"depth_mm", cm.depth_mm}, {"cr_db", cm.cr_db}});
    j["methods"].push_back(jm);
  }
  return j.dump(2) + "\n";
}

void write_scenario_artifacts(const ScenarioResult& result,
                              const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const Scenario& s = result.scenario;
  const ImagingGrid grid = s.grid();

  write_rf(result.frame, out_dir / "rf.parf");

  json prov;
  prov["tool_version"] = kVersion;
  prov["scenario"] = s.name;
  prov["config_hash"] = result.report.config_hash;
  prov["noise_seed"] = s.noise_seed;
  prov["envelope_mode"] = result.report.envelope_mode;
  prov["noise_convention"] = result.report.noise_convention;
  prov["outputs"] = json::array();
  prov["outputs"].push_back("rf.parf");

  for (const auto& mi : result.images) {
    const std::string name = method_name(mi.method);
    write_pgm(mi.display.db, s.display_dynamic_range,
              out_dir / (name + "_db.pgm"));
    write_tabular(mi.display.db, grid, "db", out_dir / (name + "_db.tab"));
    write_tabular(mi.display.envelope, grid, "envelope",
                  out_dir / (name + "_env.tab"));
    prov["outputs"].push_back(name + "_db.pgm");
    prov["outputs"].push_back(name + "_db.tab");
    prov["outputs"].push_back(name + "_env.tab");
    for (double depth : s.metrics.profile_depths) {
      LateralProfile p = lateral_profile(mi.metrics_db, grid, depth);
      char fname[96];
      std::snprintf(fname, sizeof(fname), "%s_profile_%.2fmm.tab",
                    name.c_str(), depth * 1e3);
      write_profile(p, out_dir / fname);
      prov["outputs"].push_back(fname);
    }
  }

  std::ofstream mj(out_dir / "metrics.json");
  if (!mj) throw Error("io_error", "cannot write metrics.json");
  mj << report_to_json(result.report);
  prov["outputs"].push_back("metrics.json");

  std::ofstream pj(out_dir / "provenance.json");
  if (!pj) throw Error("io_error", "cannot write provenance.json");
  pj << prov.dump(2) << "\n";
}

}  // namespace pabeam
