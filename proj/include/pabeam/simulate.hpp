#pragma once

#include <cstdint>

#include "pabeam/phantom.hpp"
#include "pabeam/types.hpp"

namespace pabeam {

// Band-limited transducer surrogate: Gaussian-windowed sine whose amplitude
// spectrum has a -6 dB full width of fractional_bandwidth * f0.
struct PulseModel {
  double center_frequency;      // Hz
  double fractional_bandwidth;  // at -6 dB, e.g. 0.77

  PulseModel(double f0, double bw);

  double sigma_t() const;       // Gaussian window time constant
  double half_support() const;  // evaluation window, kPulseSupportSigmas wide
};

// Gaussian tails beyond 6 sigma are < 2e-8 of the peak, below every level
// the scenarios measure.
inline constexpr double kPulseSupportSigmas = 6.0;

double pulse_waveform(double t, const PulseModel& pulse);

// Shortest duration covering the farthest absorber's one-way travel time
// plus the pulse support.
double required_duration(const Phantom& phantom, const ArrayGeometry& geometry,
                         const MediumModel& medium, const PulseModel& pulse);

// x_i(k) = sum_s (a_s / r_si) * p(t_k - r_si / c) with spherical spreading;
// channels are synthesized independently (parallel-safe, channel order fixed).
RfFrame simulate_rf(const Phantom& phantom, const ArrayGeometry& geometry,
                    const MediumModel& medium, const PulseModel& pulse,
                    double sample_rate, double duration,
                    double start_time = 0.0);

// Adds i.i.d. zero-mean Gaussian noise with sigma = rms(frame) *
// 10^(-snr_db/20). Each channel draws from its own generator seeded with
// seed ^ channel, so the result is independent of worker count.
RfFrame add_noise(const RfFrame& frame, double snr_db, std::uint64_t seed);

}  // namespace pabeam
