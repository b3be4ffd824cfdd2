#include "pabeam/bench.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pabeam/beamform.hpp"
#include "pabeam/simulate.hpp"

namespace pabeam {

namespace {

volatile double g_sink = 0.0;  // keeps kernel results alive

enum class Kern { kDas, kDmasNaive, kDmasFast, kDsNaive, kDsFast };

Kern kern_of(const std::string& kernel) {
  if (kernel == "das") return Kern::kDas;
  if (kernel == "dmas_naive") return Kern::kDmasNaive;
  if (kernel == "dmas_fast") return Kern::kDmasFast;
  if (kernel == "dsdmas_naive") return Kern::kDsNaive;
  return Kern::kDsFast;
}

template <Kern K>
double timed_pass(std::span<const double> data, int m) {
  const std::size_t pixels = data.size() / m;
  std::vector<double> scratch(static_cast<std::size_t>(2 * m));
  const std::span<double> terms0(scratch.data(),
                                 static_cast<std::size_t>(m - 1));
  const std::span<double> terms1(scratch.data() + m,
                                 static_cast<std::size_t>(m - 1));
  auto kernel = [&](std::size_t p, std::span<double> terms) {
    std::span<const double> d(data.data() + p * m, static_cast<std::size_t>(m));
    if constexpr (K == Kern::kDas) return das_pixel(d);
    if constexpr (K == Kern::kDmasNaive) return dmas_pixel_naive(d);
    if constexpr (K == Kern::kDmasFast) return dmas_pixel_fast(d);
    if constexpr (K == Kern::kDsNaive) return dsdmas_pixel_naive(d, terms);
    if constexpr (K == Kern::kDsFast) return dsdmas_pixel_fast(d, terms);
  };
  // Two independent accumulators let consecutive pixels overlap in the
  // pipeline, so short-M passes measure kernel throughput rather than
  // per-call drain.
  double acc0 = 0.0, acc1 = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t p = 0;
  for (; p + 1 < pixels; p += 2) {
    acc0 += kernel(p, terms0);
    acc1 += kernel(p + 1, terms1);
  }
  for (; p < pixels; ++p) acc0 += kernel(p, terms0);
  const auto t1 = std::chrono::steady_clock::now();
  g_sink = g_sink + acc0 + acc1;
  return std::chrono::duration<double>(t1 - t0).count();
}

double time_once(std::span<const double> data, int m,
                 const std::string& kernel) {
  switch (kern_of(kernel)) {
    case Kern::kDas: return timed_pass<Kern::kDas>(data, m);
    case Kern::kDmasNaive: return timed_pass<Kern::kDmasNaive>(data, m);
    case Kern::kDmasFast: return timed_pass<Kern::kDmasFast>(data, m);
    case Kern::kDsNaive: return timed_pass<Kern::kDsNaive>(data, m);
    case Kern::kDsFast: return timed_pass<Kern::kDsFast>(data, m);
  }
  return 0.0;
}

std::uint64_t measure_couplings(int m, const std::string& kernel,
                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(m);
  for (double& x : v) x = u(rng);
  OpTally tally;
  std::span<const double> d(v);
  if (kernel == "das") {
    das_pixel(d, tally);
    return tally.additions;  // DAS performs no multiplications
  }
  else if (kernel == "dmas_naive") dmas_pixel_naive(d, tally);
  else if (kernel == "dmas_fast") dmas_pixel_fast(d, tally);
  else if (kernel == "dsdmas_naive") dsdmas_pixel_naive(d, tally);
  else {
    std::vector<double> scratch(m - 1);
    dsdmas_pixel_fast(d, std::span<double>(scratch), tally);
  }
  return tally.couplings;
}

std::uint64_t table_ops(int m, const std::string& kernel) {
  const std::uint64_t mm = static_cast<std::uint64_t>(m);
  if (kernel == "das") return mm;
  if (kernel.rfind("dmas", 0) == 0) return mm * (mm - 1) / 2 + 2 * (mm - 1);
  return mm * (mm - 1) + 3 * (mm - 1);
}

double fit_log_slope(const std::vector<BenchEntry>& entries) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(entries.size());
  for (const auto& e : entries) {
    const double x = std::log(static_cast<double>(e.m));
    const double y = std::log(std::max(e.median_seconds, 1e-12));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

BenchReport run_bench(const std::vector<int>& m_values, std::size_t pixels,
                      int repetitions, std::uint64_t seed) {
  if (m_values.empty()) throw Error("domain_error", "bench needs M values");
  for (int m : m_values)
    if (m < 3) throw Error("domain_error", "bench M values must be >= 3");
  if (repetitions < 1) throw Error("domain_error", "repetitions must be >= 1");

  BenchReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  const std::vector<std::string> kernels = {
      "das", "dmas_naive", "dmas_fast", "dsdmas_naive", "dsdmas_fast"};

  // Shared sample buffers per M, sized for the largest pixel count.
  std::map<int, std::vector<double>> samples;
  for (int m : m_values) {
    std::vector<double> data(pixels * 16 * m);
    for (double& x : data) x = u(rng);
    samples.emplace(m, std::move(data));
  }
  std::map<std::string, std::map<int, std::vector<double>>> times;

  // Interleaved sweeps: each repetition times every (kernel, M) pair once,
  // so machine-load drift hits all series alike and cancels in the
  // log-log ratios.
  for (int r = -1; r < repetitions; ++r) {  // r == -1 is the warm-up sweep
    for (const auto& kernel : kernels) {
      const bool fast = kernel == "das" || kernel.ends_with("fast");
      const std::size_t px = fast ? pixels * 16 : pixels;
      for (int m : m_values) {
        std::span<const double> data(samples[m].data(), px * m);
        const double t = time_once(data, m, kernel);
        if (r >= 0) times[kernel][m].push_back(t);
      }
    }
  }

  for (const auto& kernel : kernels) {
    BenchSeries series;
    series.kernel = kernel;
    const bool fast = kernel == "das" || kernel.ends_with("fast");
    for (int m : m_values) {
      auto& ts = times[kernel][m];
      std::sort(ts.begin(), ts.end());
      BenchEntry e;
      e.m = m;
      e.pixels = fast ? pixels * 16 : pixels;
      e.median_seconds = ts[ts.size() / 2];
      e.couplings_per_pixel = measure_couplings(m, kernel, rng);
      e.table_ops = table_ops(m, kernel);
      series.entries.push_back(e);
    }
    series.log_slope = fit_log_slope(series.entries);
    report.series.push_back(std::move(series));
  }

  // serial vs OpenMP image drivers on a small synthetic scene
  {
    const ArrayGeometry geom(32, 0.2e-3);
    const MediumModel medium(1540.0);
    const PulseModel pulse(7e6, 0.77);
    const Phantom phantom = make_two_wire_phantom();
    RfFrame frame = simulate_rf(phantom, geom, medium, pulse, 40e6,
                                required_duration(phantom, geom, medium,
                                                  pulse) + 1e-6);
    const ImagingGrid grid(-5e-3, 5e-3, 25e-3, 55e-3, 0.2e-3, 0.2e-3);
    BeamformConfig cfg;
    cfg.method = Method::kDmas;
    cfg.sound_speed = 1540.0;

    auto t0 = std::chrono::steady_clock::now();
    Image2D serial = beamform_image_serial(frame, grid, geom, cfg);
    auto t1 = std::chrono::steady_clock::now();
    Image2D parallel = beamform_image(frame, grid, geom, cfg);
    auto t2 = std::chrono::steady_clock::now();
    report.image_serial_seconds = std::chrono::duration<double>(t1 - t0).count();
    report.image_parallel_seconds =
        std::chrono::duration<double>(t2 - t1).count();
    report.image_outputs_identical = serial.values == parallel.values;
#ifdef _OPENMP
    report.threads = omp_get_max_threads();
#else
    report.threads = 1;
#endif
  }
  return report;
}

std::string bench_to_text(const BenchReport& report) {
  std::ostringstream os;
  os << "kernel        M     measured/px   table-ops   median-s      px\n";
  char buf[160];
  for (const auto& s : report.series) {
    for (const auto& e : s.entries) {
      std::snprintf(buf, sizeof(buf), "%-12s %4d %14llu %11llu %10.3e %8zu\n",
                    s.kernel.c_str(), e.m,
                    static_cast<unsigned long long>(e.couplings_per_pixel),
                    static_cast<unsigned long long>(e.table_ops),
                    e.median_seconds, e.pixels);
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), "%-12s log-log slope %.3f\n",
                  s.kernel.c_str(), s.log_slope);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "image driver: serial %.3e s, openmp %.3e s (%d threads), "
                "outputs %s\n",
                report.image_serial_seconds, report.image_parallel_seconds,
                report.threads,
                report.image_outputs_identical ? "identical" : "DIFFER");
  os << buf;
  os << "measured/px: multiplications of sample-derived operands per pixel "
        "(additions for DAS)\n";
  os << "table-ops: published formulas DAS M; DMAS M(M-1)/2 + 2(M-1); "
        "DS-DMAS M(M-1) + 3(M-1)\n";
  return os.str();
}

std::string bench_to_json(const BenchReport& report) {
  nlohmann::json j;
  j["series"] = nlohmann::json::array();
  for (const auto& s : report.series) {
    nlohmann::json js;
    js["kernel"] = s.kernel;
    js["log_slope"] = s.log_slope;
    js["entries"] = nlohmann::json::array();
    for (const auto& e : s.entries)
      js["entries"].push_back({{"m", e.m},
                               {"couplings_per_pixel", e.couplings_per_pixel},
                               {"table_ops", e.table_ops},
                               {"median_seconds", e.median_seconds},
                               {"pixels", e.pixels}});
    j["series"].push_back(js);
  }
  j["image_driver"] = {{"serial_seconds", report.image_serial_seconds},
                       {"parallel_seconds", report.image_parallel_seconds},
                       {"outputs_identical", report.image_outputs_identical},
                       {"threads", report.threads}};
  return j.dump(2) + "\n";
}

}  // namespace pabeam
