#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "pabeam/error.hpp"

namespace pabeam {

// Per-pixel beamforming kernels on delayed samples. DAS sums the samples;
// DMAS sums all pairwise products after the signed-square-root dimensional
// correction; DS-DMAS applies the same coupling a second time over the
// DAS-like terms of the DMAS expansion.
//
// The kernels are templated on the sample type. With T = double the signed
// square root is sign(v)*sqrt(|v|). With T = complex<double> it is the
// phase-preserving root v/sqrt(|v|), which coincides with the real form on
// the real axis, so the complex instantiation is a strict extension used by
// the analytic-signal image path.

enum class KernelMode { kNaive, kFast };

inline double signed_sqrt(double v) {
  // branchless sign(v)*sqrt(|v|)
  return std::copysign(std::sqrt(std::fabs(v)), v);
}

inline std::complex<double> signed_sqrt(const std::complex<double>& v) {
  double a = std::abs(v);
  if (a == 0.0) return {0.0, 0.0};
  return v / std::sqrt(a);
}

// Multiplication tally for the complexity bookkeeping: one unit per pairwise
// multiplication of sample-derived operands. NullTally compiles away.
struct NullTally {
  void couple(std::uint64_t) {}
  void add(std::uint64_t) {}
};

struct OpTally {
  std::uint64_t couplings = 0;  // pairwise multiplications
  std::uint64_t additions = 0;
  void couple(std::uint64_t n) { couplings += n; }
  void add(std::uint64_t n) { additions += n; }
};

template <typename T, typename Tally = NullTally>
T das_pixel(std::span<const T> delayed, Tally&& tally = Tally{}) {
  T acc{};
  for (const T& v : delayed) acc += v;
  if (!delayed.empty()) tally.add(delayed.size() - 1);
  return acc;
}

// Reference form: explicit double loop over pairs with the dimensional
// correction applied per coupling, signed_sqrt(x_i * x_j) == x̄_i * x̄_j.
template <typename T, typename Tally = NullTally>
T dmas_pixel_naive(std::span<const T> delayed, Tally&& tally = Tally{}) {
  const std::size_t m = delayed.size();
  if (m < 2) throw Error("domain_error", "DMAS requires at least 2 samples");
  T acc{};
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      acc += signed_sqrt(delayed[i] * delayed[j]);
      tally.couple(1);
    }
  return acc;
}

// Out-of-line scalar instantiations (see kernels.cpp); the benchmark's
// timing reference.
double dmas_pixel_naive(std::span<const double> delayed);
double dsdmas_pixel_naive(std::span<const double> delayed,
                          std::span<double> terms_scratch);
double dsdmas_pixel_naive(std::span<const double> delayed);

template <typename T, typename Tally = NullTally>
T dmas_pixel_fast(std::span<const T> delayed, Tally&& tally = Tally{}) {
  const std::size_t m = delayed.size();
  if (m < 2) throw Error("domain_error", "DMAS requires at least 2 samples");
  T sum{};
  T sumsq{};
  for (const T& v : delayed) {
    T xb = signed_sqrt(v);
    sum += xb;
    sumsq += xb * xb;
  }
  tally.couple(m + 1);  // M squares plus the factored square
  return (sum * sum - sumsq) * 0.5;
}

template <typename T>
T dmas_pixel(std::span<const T> delayed, KernelMode mode) {
  return mode == KernelMode::kNaive ? dmas_pixel_naive(delayed)
                                    : dmas_pixel_fast(delayed);
}

// terms[i] = xb[i] * sum_{j>i} xb[j] for i in 0..M-2, suffix sums computed
// once. Their plain sum equals the DMAS output exactly.
template <typename T, typename Tally = NullTally>
void dsdmas_terms(std::span<const T> delayed, std::span<T> terms,
                  Tally&& tally = Tally{}) {
  const std::size_t m = delayed.size();
  if (m < 2) throw Error("domain_error", "DS-DMAS terms require >= 2 samples");
  if (terms.size() != m - 1)
    throw Error("domain_error", "terms span must have M-1 entries");
  T suffix = signed_sqrt(delayed[m - 1]);
  for (std::size_t i = m - 1; i-- > 0;) {
    T xb = signed_sqrt(delayed[i]);
    terms[i] = xb * suffix;
    tally.couple(1);
    suffix += xb;
  }
}

template <typename T>
std::vector<T> dsdmas_terms(std::span<const T> delayed) {
  std::vector<T> terms(delayed.size() - 1);
  dsdmas_terms(delayed, std::span<T>(terms));
  return terms;
}

// Scratch-buffer reference form; terms_scratch must have M-1 entries. Each
// expansion term's inner sum is evaluated explicitly (no suffix-sum reuse),
// and the second-stage correction is applied per coupling,
// signed_sqrt(t_i * t_j) == t̄_i * t̄_j.
template <typename T, typename Tally = NullTally>
T dsdmas_pixel_naive(std::span<const T> delayed, std::span<T> terms_scratch,
                     Tally&& tally = Tally{}) {
  const std::size_t m = delayed.size();
  if (m < 3) throw Error("domain_error", "DS-DMAS requires at least 3 samples");
  if (terms_scratch.size() != m - 1)
    throw Error("domain_error", "terms scratch must have M-1 entries");
  for (std::size_t i = 0; i + 1 < m; ++i) {
    T inner{};
    for (std::size_t j = i + 1; j < m; ++j) inner += signed_sqrt(delayed[j]);
    terms_scratch[i] = signed_sqrt(delayed[i]) * inner;
    tally.couple(1);
  }
  T acc{};
  for (std::size_t i = 0; i + 1 < terms_scratch.size(); ++i)
    for (std::size_t j = i + 1; j < terms_scratch.size(); ++j) {
      acc += signed_sqrt(terms_scratch[i] * terms_scratch[j]);
      tally.couple(1);
    }
  return acc;
}

template <typename T, typename Tally = NullTally>
T dsdmas_pixel_naive(std::span<const T> delayed, Tally&& tally = Tally{}) {
  if (delayed.size() < 3)
    throw Error("domain_error", "DS-DMAS requires at least 3 samples");
  std::vector<T> terms(delayed.size() - 1);
  return dsdmas_pixel_naive(delayed, std::span<T>(terms), tally);
}

// Scratch-buffer variant used by the image drivers to avoid per-pixel
// allocation; scratch must have M-1 entries.
template <typename T, typename Tally = NullTally>
T dsdmas_pixel_fast(std::span<const T> delayed, std::span<T> scratch,
                    Tally&& tally = Tally{}) {
  const std::size_t m = delayed.size();
  if (m < 3) throw Error("domain_error", "DS-DMAS requires at least 3 samples");
  dsdmas_terms(delayed, scratch, tally);
  T sum{};
  T sumsq{};
  for (T& t : scratch) {
    T tb = signed_sqrt(t);
    sum += tb;
    sumsq += tb * tb;
  }
  tally.couple(m);  // M-1 squares plus the factored square
  return (sum * sum - sumsq) * 0.5;
}

template <typename T>
T dsdmas_pixel_fast(std::span<const T> delayed) {
  std::vector<T> scratch(delayed.size() - 1);
  return dsdmas_pixel_fast(delayed, std::span<T>(scratch));
}

template <typename T>
T dsdmas_pixel(std::span<const T> delayed, KernelMode mode) {
  return mode == KernelMode::kNaive ? dsdmas_pixel_naive(delayed)
                                    : dsdmas_pixel_fast(delayed);
}

}  // namespace pabeam
