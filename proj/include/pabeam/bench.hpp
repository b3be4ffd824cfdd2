#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pabeam/kernels.hpp"

namespace pabeam {

struct BenchEntry {
  int m = 0;
  std::uint64_t couplings_per_pixel = 0;  // measured by instrumented kernels
                                          // (additions for DAS)
  std::uint64_t table_ops = 0;            // published formula value
  double median_seconds = 0.0;
  std::size_t pixels = 0;
};

struct BenchSeries {
  std::string kernel;  // das | dmas_naive | dmas_fast | dsdmas_naive | ...
  std::vector<BenchEntry> entries;
  double log_slope = 0.0;  // fitted d(log t)/d(log M)
};

struct BenchReport {
  std::vector<BenchSeries> series;
  // serial reference vs OpenMP image driver on a small synthetic scene
  double image_serial_seconds = 0.0;
  double image_parallel_seconds = 0.0;
  bool image_outputs_identical = false;
  int threads = 1;
};

// Times the per-pixel kernels on random delayed-sample vectors (median of
// `repetitions`), measures exact coupling counts, and compares the serial
// and OpenMP image drivers.
BenchReport run_bench(const std::vector<int>& m_values, std::size_t pixels,
                      int repetitions, std::uint64_t seed);

std::string bench_to_text(const BenchReport& report);
std::string bench_to_json(const BenchReport& report);

}  // namespace pabeam
