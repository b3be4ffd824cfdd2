#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pabeam/bench.hpp"
#include "pabeam/scenario.hpp"
#include "pabeam/version.hpp"

namespace fs = std::filesystem;
using namespace pabeam;

namespace {

struct CommonArgs {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::string method = "all";
  std::string mode;
  std::optional<double> dynamic_range;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
  auto* opt = cmd->add_option("--config", args.config, "scenario config path");
  if (needs_config) opt->required();
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--seed", args.seed, "noise seed override");
  cmd->add_option("--method", args.method, "das|dmas|dsdmas|all");
  cmd->add_option("--mode", args.mode, "naive|fast");
  cmd->add_option("--dynamic-range", args.dynamic_range,
                  "display dynamic range in dB");
}

Scenario load_with_overrides(const CommonArgs& args) {
  Scenario s = load_scenario(args.config);
  ScenarioOverrides ov;
  ov.seed = args.seed;
  if (args.method != "all")
    ov.methods = std::vector<Method>{parse_method(args.method)};
  if (!args.mode.empty()) ov.mode = parse_mode(args.mode);
  ov.dynamic_range = args.dynamic_range;
  apply_overrides(s, ov);
  return s;
}

void cmd_simulate(const CommonArgs& args) {
  Scenario s = load_with_overrides(args);
  RfFrame frame = simulate_scenario_rf(s);
  fs::create_directories(args.out);
  write_rf(frame, fs::path(args.out) / "rf.parf");
  std::printf("wrote %s (%d x %d samples at %.6g MHz)\n",
              (fs::path(args.out) / "rf.parf").c_str(), frame.num_elements(),
              frame.num_samples(), frame.sample_rate() / 1e6);
}

void cmd_beamform(const CommonArgs& args, const std::string& rf_path) {
  Scenario s = load_with_overrides(args);
  fs::path rf = rf_path.empty() ? fs::path(args.out) / "rf.parf"
                                : fs::path(rf_path);
  RfFrame frame = read_rf(rf);
  ScenarioResult result =
      run_scenario(s, frame, file_fnv1a(args.config));
  write_scenario_artifacts(result, args.out);
  std::printf("beamformed %zu method(s) into %s\n", result.images.size(),
              args.out.c_str());
}

void cmd_metrics(const CommonArgs& args) {
  Scenario s = load_with_overrides(args);
  const ImagingGrid grid = s.grid();
  std::vector<MethodImages> images;
  for (Method m : s.methods) {
    fs::path env_path =
        fs::path(args.out) / (method_name(m) + "_env.tab");
    TabularImage tab = read_tabular(env_path);
    if (tab.image.n_lateral != grid.n_lateral() ||
        tab.image.n_axial != grid.n_axial())
      throw Error("format_error",
                  env_path.string() + " does not match the config grid");
    MethodImages mi;
    mi.method = m;
    mi.display.envelope = tab.image;
    mi.display.db = log_compress(tab.image, s.display_dynamic_range);
    mi.display.dynamic_range = s.display_dynamic_range;
    mi.metrics_db = log_compress(tab.image, s.metrics.dynamic_range_db);
    images.push_back(std::move(mi));
  }
  MetricsReport report = compute_metrics(s, images, file_fnv1a(args.config));
  fs::create_directories(args.out);
  std::ofstream os(fs::path(args.out) / "metrics.json");
  os << report_to_json(report);
  for (const auto& mi : images)
    for (double depth : s.metrics.profile_depths) {
      LateralProfile p = lateral_profile(mi.metrics_db, grid, depth);
      char fname[96];
      std::snprintf(fname, sizeof(fname), "%s_profile_%.2fmm.tab",
                    method_name(mi.method).c_str(), depth * 1e3);
      write_profile(p, fs::path(args.out) / fname);
    }
  std::printf("wrote %s\n", (fs::path(args.out) / "metrics.json").c_str());
}

void cmd_run(const CommonArgs& args) {
  Scenario s = load_with_overrides(args);
  ScenarioResult result =
      run_scenario(s, std::nullopt, file_fnv1a(args.config));
  write_scenario_artifacts(result, args.out);
  std::printf("scenario %s complete; artifacts in %s\n", s.name.c_str(),
              args.out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pabeam: DAS / DMAS / DS-DMAS photoacoustic reconstruction"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonArgs sim_args, bf_args, met_args, run_args;
  std::string rf_path;

  auto* sim = app.add_subcommand("simulate", "synthesize an RF frame");
  add_common(sim, sim_args);

  auto* bf = app.add_subcommand("beamform", "reconstruct images from RF");
  add_common(bf, bf_args);
  bf->add_option("--rf", rf_path, "RF input path (default <out>/rf.parf)");

  auto* met = app.add_subcommand("metrics",
                                 "compute metrics from envelope tables");
  add_common(met, met_args);

  auto* run = app.add_subcommand("run", "simulate + beamform + metrics");
  add_common(run, run_args);

  auto* bench = app.add_subcommand("bench", "kernel complexity benchmark");
  std::vector<int> m_values = {16, 32, 64, 128};
  std::size_t pixels = 4096;
  int reps = 5;
  std::uint64_t bench_seed = 1234;
  std::string bench_out;
  bench->add_option("--elements", m_values, "array sizes M");
  bench->add_option("--pixels", pixels, "pixels per timing pass");
  bench->add_option("--repetitions", reps, "timing repetitions");
  bench->add_option("--seed", bench_seed, "rng seed");
  bench->add_option("--out", bench_out, "also write a JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) cmd_simulate(sim_args);
    if (bf->parsed()) cmd_beamform(bf_args, rf_path);
    if (met->parsed()) cmd_metrics(met_args);
    if (run->parsed()) cmd_run(run_args);
    if (bench->parsed()) {
      BenchReport report = run_bench(m_values, pixels, reps, bench_seed);
      std::fputs(bench_to_text(report).c_str(), stdout);
      if (!bench_out.empty()) {
        fs::create_directories(fs::path(bench_out).parent_path().empty()
                                   ? "."
                                   : fs::path(bench_out).parent_path());
        std::ofstream os(bench_out);
        os << bench_to_json(report);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error:" << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error:internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
