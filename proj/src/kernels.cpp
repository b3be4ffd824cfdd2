#include "pabeam/kernels.hpp"

// Out-of-line double-precision naive kernels. These are the timing reference
// for the complexity benchmark, pinned to scalar code so the measured cost
// per coupling does not drift with inner-loop length; the bodies delegate to
// the header templates, which get inlined under these options.

namespace pabeam {

__attribute__((optimize("no-tree-vectorize"))) double dmas_pixel_naive(
    std::span<const double> delayed) {
  return dmas_pixel_naive<double>(delayed, NullTally{});
}

__attribute__((optimize("no-tree-vectorize"))) double dsdmas_pixel_naive(
    std::span<const double> delayed, std::span<double> terms_scratch) {
  return dsdmas_pixel_naive<double>(delayed, terms_scratch, NullTally{});
}

double dsdmas_pixel_naive(std::span<const double> delayed) {
  if (delayed.size() < 3)
    throw Error("domain_error", "DS-DMAS requires at least 3 samples");
  std::vector<double> terms(delayed.size() - 1);
  return dsdmas_pixel_naive(delayed, std::span<double>(terms));
}

}  // namespace pabeam
