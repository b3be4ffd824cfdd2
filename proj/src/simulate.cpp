#include "pabeam/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace pabeam {

PulseModel::PulseModel(double f0, double bw)
    : center_frequency(f0), fractional_bandwidth(bw) {
  if (!(f0 > 0.0)) throw Error("domain_error", "center_frequency must be > 0");
  if (!(bw > 0.0 && bw < 2.0))
    throw Error("domain_error", "fractional_bandwidth must be in (0, 2)");
}

double PulseModel::sigma_t() const {
  return std::sqrt(2.0 * std::numbers::ln2) /
         (std::numbers::pi * fractional_bandwidth * center_frequency);
}

double PulseModel::half_support() const {
  return kPulseSupportSigmas * sigma_t();
}

double pulse_waveform(double t, const PulseModel& pulse) {
  const double s = pulse.sigma_t();
  return std::exp(-t * t / (2.0 * s * s)) *
         std::sin(2.0 * std::numbers::pi * pulse.center_frequency * t);
}

double required_duration(const Phantom& phantom, const ArrayGeometry& geometry,
                         const MediumModel& medium, const PulseModel& pulse) {
  double far = 0.0;
  const int m = geometry.num_elements();
  for (const auto& a : phantom.absorbers()) {
    for (int i : {0, m - 1}) {
      double dx = a.lateral - geometry.position(i);
      far = std::max(far, std::hypot(dx, a.axial));
    }
  }
  return far / medium.sound_speed + pulse.half_support();
}

RfFrame simulate_rf(const Phantom& phantom, const ArrayGeometry& geometry,
                    const MediumModel& medium, const PulseModel& pulse,
                    double sample_rate, double duration, double start_time) {
  if (!(sample_rate > 0.0))
    throw Error("domain_error", "sample_rate must be > 0");
  const double needed = required_duration(phantom, geometry, medium, pulse);
  if (duration + start_time < needed) {
    std::ostringstream msg;
    msg << "duration " << duration << " s too short for farthest absorber; "
        << "need at least " << needed - start_time << " s";
    throw Error("duration_too_short", msg.str());
  }

  const int m = geometry.num_elements();
  const int n = static_cast<int>(std::ceil(duration * sample_rate));
  const double c = medium.sound_speed;
  const double half = pulse.half_support();

  // Validate before entering the parallel region; throwing inside it would
  // terminate the program.
  for (const auto& a : phantom.absorbers())
    if (a.axial < 1e-6)
      throw Error("domain_error", "absorber lies on the transducer plane");

  std::vector<double> data(static_cast<std::size_t>(m) * n, 0.0);

#pragma omp parallel for schedule(static)
  for (int e = 0; e < m; ++e) {
    double* ch = data.data() + static_cast<std::size_t>(e) * n;
    const double xe = geometry.position(e);
    for (const auto& a : phantom.absorbers()) {
      const double r = std::hypot(a.lateral - xe, a.axial);
      const double arrival = r / c;
      const double w = a.amplitude / r;
      int k0 = static_cast<int>(
          std::ceil((arrival - half - start_time) * sample_rate));
      int k1 = static_cast<int>(
          std::floor((arrival + half - start_time) * sample_rate));
      k0 = std::max(k0, 0);
      k1 = std::min(k1, n - 1);
      for (int k = k0; k <= k1; ++k) {
        double t = start_time + k / sample_rate;
        ch[k] += w * pulse_waveform(t - arrival, pulse);
      }
    }
  }
  return RfFrame(m, n, sample_rate, start_time, std::move(data));
}

RfFrame add_noise(const RfFrame& frame, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0.0)
    return RfFrame(frame.num_elements(), frame.num_samples(),
                   frame.sample_rate(), frame.start_time(), frame.data());
  if (!std::isfinite(snr_db))
    throw Error("domain_error", "snr_db must be finite or +infinity");

  double sumsq = 0.0;
  for (double v : frame.data()) sumsq += v * v;
  const double rms = std::sqrt(sumsq / frame.data().size());
  if (rms == 0.0)
    throw Error("zero_frame",
                "cannot add finite-SNR noise to an all-zero frame");
  const double sigma = rms * std::pow(10.0, -snr_db / 20.0);

  const int m = frame.num_elements();
  const int n = frame.num_samples();
  std::vector<double> data = frame.data();
#pragma omp parallel for schedule(static)
  for (int e = 0; e < m; ++e) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(e));
    std::normal_distribution<double> gauss(0.0, sigma);
    double* ch = data.data() + static_cast<std::size_t>(e) * n;
    for (int k = 0; k < n; ++k) ch[k] += gauss(rng);
  }
  return RfFrame(m, n, frame.sample_rate(), frame.start_time(),
                 std::move(data));
}

}  // namespace pabeam
